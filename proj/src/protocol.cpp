#include "zkpol/protocol.hpp"

#include "zkpol/codec.hpp"
#include "zkpol/localcalc.hpp"

namespace zkpol::protocol {

namespace {

template <class T>
const T* as(const Message& m) {
  return std::get_if<T>(&m.payload);
}

Message make(Party from, Party to, const SessionId& sid, Payload p) { return Message{from, to, sid, std::move(p)}; }

json points_json(const std::vector<Point>& pts) {
  json a = json::array();
  for (const Point& p : pts) a.push_back(codec::write(p));
  return a;
}

std::string result_name(bool ok) { return ok ? "ok" : "not_ok"; }

json body(const Payload& p) {
  return std::visit(
      [](const auto& m) -> json {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, msg::Move>) {
          return {{"point", codec::write(m.p)}};
        } else if constexpr (std::is_same_v<T, msg::Coords>) {
          return {{"trail", points_json(m.trail)}, {"sigma", to_hex(m.sigma)}};
        } else if constexpr (std::is_same_v<T, msg::WitPk>) {
          return {{"pk", to_hex(m.pk)}};
        } else if constexpr (std::is_same_v<T, msg::Prove> || std::is_same_v<T, msg::Verify>) {
          return {{"ad", to_json(m.ad)}};
        } else if constexpr (std::is_same_v<T, msg::Sig>) {
          return {{"h", u128_to_string(m.h.value)}, {"sigma", to_hex(m.sigma)}};
        } else if constexpr (std::is_same_v<T, msg::ProveWitness>) {
          return {{"ad", to_json(m.ad)}, {"h", u128_to_string(m.h.value)}, {"trail", points_json(m.trail)}};
        } else if constexpr (std::is_same_v<T, msg::ProveQuery>) {
          return {{"ad", to_json(m.ad)}, {"h", u128_to_string(m.h.value)}};
        } else if constexpr (std::is_same_v<T, msg::Result>) {
          return {{"result", result_name(m.ok)}};
        } else if constexpr (std::is_same_v<T, msg::Leak>) {
          return m.values;
        } else {
          return json::object();
        }
      },
      p);
}

void put_be32(Bytes& out, std::uint32_t v) {
  for (int i = 3; i >= 0; --i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

}  // namespace

AuthorityData authority_data(const StatementInstance& inst) {
  AuthorityData ad;
  std::visit(
      [&](const auto& in) {
        ad.field = in.field;
        ad.pp = in.pp;
        ad.n_traj = in.n_traj;
        if constexpr (std::is_same_v<std::decay_t<decltype(in)>, EvInstance>) {
          ad.kind = StatementKind::Ev;
          ad.subsidy = in.policy;
          ad.circles = in.circles;
        } else {
          ad.kind = StatementKind::Tax;
          ad.tax = in.policy;
          ad.triangles = in.triangles;
          ad.region = in.region;
        }
      },
      inst);
  return ad;
}

StatementInstance instantiate(const AuthorityData& ad, FieldElement h, std::vector<Point> trail) {
  if (ad.kind == StatementKind::Ev) {
    return EvInstance{ad.field, ad.pp, ad.n_traj, h, ad.subsidy, ad.circles, Trail::from_points(std::move(trail))};
  }
  return TaxInstance{ad.field, ad.pp, ad.n_traj, h, ad.tax, ad.triangles, Trail::from_points(std::move(trail)), ad.region};
}

std::optional<FieldElement> trail_digest(const AuthorityData& ad, const std::vector<Point>& trail) {
  if (trail.empty() || trail.size() > ad.n_traj) return std::nullopt;
  try {
    return statements::trail_hash(ad.field, ad.pp, Trail::from_points(trail), ad.n_traj);
  } catch (const Error&) {
    return std::nullopt;
  }
}

bool relation(const std::vector<Point>& trail, const AuthorityData& ad) {
  const auto h = trail_digest(ad, trail);
  if (!h) return false;
  try {
    const StatementInstance inst = instantiate(ad, *h, trail);
    std::visit([](const auto& in) { statements::validate(in); }, inst);
    return statements::oracle(inst);
  } catch (const Error&) {
    return false;
  }
}

json to_json(const AuthorityData& ad) {
  json j;
  j["kind"] = statement_kind_name(ad.kind);
  j["field_params"] = codec::write(ad.field.params());
  j["poseidon"] = codec::write(ad.field, ad.pp);
  if (ad.kind == StatementKind::Ev) {
    j["sizes"] = {{"n_traj", std::to_string(ad.n_traj)}, {"n_circ", std::to_string(ad.circles.circles.size())}};
    j["policy"] = codec::write(ad.subsidy);
    json cs = json::array();
    for (const auto& c : ad.circles.circles) cs.push_back(codec::write(c));
    j["geometry"] = {{"circles", cs}};
  } else {
    j["sizes"] = {{"n_traj", std::to_string(ad.n_traj)}, {"n_tri", std::to_string(ad.triangles.triangles.size())}};
    j["policy"] = codec::write(ad.tax);
    json ts = json::array();
    for (const auto& t : ad.triangles.triangles) ts.push_back(codec::write(t));
    j["geometry"] = {{"triangles", ts}};
    if (ad.region) j["geometry"]["region"] = codec::write(*ad.region);
  }
  return j;
}

Bytes signing_bytes(const SessionId& sid, FieldElement h) {
  Bytes out;
  put_be32(out, static_cast<std::uint32_t>(sid.size()));
  out.insert(out.end(), sid.begin(), sid.end());
  put_be32(out, 16);
  for (int i = 15; i >= 0; --i) out.push_back(static_cast<std::uint8_t>(h.value >> (8 * i)));
  return out;
}

const char* party_name(Party p) noexcept {
  switch (p) {
    case Party::Environment: return "environment";
    case Party::Witness: return "witness";
    case Party::Prover: return "prover";
    case Party::Verifier: return "verifier";
    case Party::Functionality: return "functionality";
    case Party::Adversary: return "adversary";
  }
  return "?";
}

const char* payload_kind(const Payload& p) noexcept {
  static constexpr const char* names[] = {"init", "move",  "getcoords", "coords", "witpk",  "prove", "verify",
                                          "sig",  "prove!", "prove?",   "proven", "result", "leak"};
  return names[p.index()];
}

const char* corruption_name(Corruption c) noexcept {
  switch (c) {
    case Corruption::None: return "none";
    case Corruption::Prover: return "prover";
    case Corruption::Verifier: return "verifier";
  }
  return "?";
}

// ---- Witness device ----

WitnessDevice::WitnessDevice(const SignatureScheme& scheme, HashSpec hash, Bytes key_seed)
    : scheme_(&scheme), hash_(std::move(hash)), key_seed_(std::move(key_seed)) {}

std::vector<Message> WitnessDevice::handle(const Message& m) {
  if (as<msg::Init>(m) && m.from == Party::Environment) {
    sid_ = m.sid;
    Bytes seed = key_seed_;
    if (seed.empty()) {
      const std::string s = "zkpol/witness/" + m.sid;
      seed.assign(s.begin(), s.end());
    }
    keys_ = scheme_->keygen(seed);
    log_.clear();
    return {make(Party::Witness, Party::Prover, m.sid, msg::WitPk{keys_.pk}),
            make(Party::Witness, Party::Verifier, m.sid, msg::WitPk{keys_.pk})};
  }
  if (!sid_) throw Error(ErrorCode::ProtocolOrderViolation, std::string(payload_kind(m.payload)) + " before init");
  if (m.sid != *sid_) return {};
  if (const auto* mv = as<msg::Move>(m); mv && m.from == Party::Environment) {
    if (log_.size() >= hash_.n_traj) {
      throw Error(ErrorCode::ProtocolOrderViolation, "coordinate log full (" + std::to_string(hash_.n_traj) + " points)");
    }
    log_.push_back(mv->p);
    return {};
  }
  if (as<msg::GetCoords>(m) && m.from == Party::Prover) {
    if (log_.empty()) throw Error(ErrorCode::ProtocolOrderViolation, "getcoords with an empty coordinate log");
    const FieldElement h = statements::trail_hash(hash_.field, hash_.pp, Trail::from_points(log_), hash_.n_traj);
    return {make(Party::Witness, Party::Prover, *sid_, msg::Coords{log_, scheme_->sign(keys_.sk, signing_bytes(*sid_, h))})};
  }
  return {};
}

// ---- Prover ----

ProverMachine::ProverMachine(const SignatureScheme& scheme, bool corrupted) : scheme_(&scheme), corrupted_(corrupted) {}

std::vector<Message> ProverMachine::handle(const Message& m) {
  if (const auto* w = as<msg::WitPk>(m); w && m.from == Party::Witness) {
    pk_ = w->pk;
    return {};
  }
  if (const auto* p = as<msg::Prove>(m); p && m.from == Party::Environment && !ad_) {
    sid_ = m.sid;
    ad_ = p->ad;
    if (!pk_) {
      done_ = true;
      return {make(Party::Prover, Party::Environment, m.sid, msg::Result{false})};
    }
    return {make(Party::Prover, Party::Witness, m.sid, msg::GetCoords{})};
  }
  const auto* c = as<msg::Coords>(m);
  if (!c || m.from != Party::Witness || !ad_ || done_ || m.sid != *sid_) return {};

  std::vector<Message> out;
  if (corrupted_) {
    out.push_back(make(Party::Prover, Party::Adversary, *sid_,
                       msg::Leak{{{"ad_p", to_json(*ad_)}, {"trail", points_json(c->trail)}, {"sigma", to_hex(c->sigma)}}}));
  }
  done_ = true;
  const auto h = trail_digest(*ad_, c->trail);
  const bool ok = h && scheme_->verify(*pk_, signing_bytes(*sid_, *h), c->sigma) && relation(c->trail, *ad_);
  if (ok) {
    out.push_back(make(Party::Prover, Party::Verifier, *sid_, msg::Sig{*h, c->sigma}));
    out.push_back(make(Party::Prover, Party::Functionality, *sid_, msg::ProveWitness{*ad_, *h, c->trail}));
  }
  out.push_back(make(Party::Prover, Party::Environment, *sid_, msg::Result{ok}));
  return out;
}

std::vector<Message> ProverMachine::finish() {
  if (!ad_ || done_) return {};
  done_ = true;
  return {make(Party::Prover, Party::Environment, *sid_, msg::Result{false})};
}

// ---- Verifier ----

VerifierMachine::VerifierMachine(const SignatureScheme& scheme, bool corrupted)
    : scheme_(&scheme), corrupted_(corrupted) {}

std::vector<Message> VerifierMachine::handle(const Message& m) {
  if (const auto* w = as<msg::WitPk>(m); w && m.from == Party::Witness) {
    pk_ = w->pk;
    return {};
  }
  if (const auto* v = as<msg::Verify>(m); v && m.from == Party::Environment && !ad_) {
    sid_ = m.sid;
    ad_ = v->ad;
    return progress();
  }
  if (const auto* s = as<msg::Sig>(m); s && m.from == Party::Prover && !sig_) {
    if (sid_ && m.sid != *sid_) return {};
    sig_ = *s;
    return progress();
  }
  if (as<msg::Proven>(m) && m.from == Party::Functionality && queried_ && !done_ && m.sid == *sid_) {
    done_ = true;
    return {make(Party::Verifier, Party::Environment, *sid_, msg::Result{true})};
  }
  return {};
}

std::vector<Message> VerifierMachine::progress() {
  if (!ad_ || !sig_ || queried_ || done_) return {};
  std::vector<Message> out;
  if (corrupted_) {
    out.push_back(make(Party::Verifier, Party::Adversary, *sid_,
                       msg::Leak{{{"ad_v", to_json(*ad_)}, {"h", u128_to_string(sig_->h.value)}}}));
  }
  if (!pk_ || !scheme_->verify(*pk_, signing_bytes(*sid_, sig_->h), sig_->sigma)) {
    done_ = true;
    out.push_back(make(Party::Verifier, Party::Environment, *sid_, msg::Result{false}));
    return out;
  }
  queried_ = true;
  out.push_back(make(Party::Verifier, Party::Functionality, *sid_, msg::ProveQuery{*ad_, sig_->h}));
  return out;
}

std::vector<Message> VerifierMachine::finish() {
  if (!ad_ || done_) return {};
  done_ = true;
  return {make(Party::Verifier, Party::Environment, *sid_, msg::Result{false})};
}

// ---- F_ZK stand-in ----

std::vector<Message> ZkFunctionality::handle(const Message& m) {
  if (const auto* w = as<msg::ProveWitness>(m); w && m.from == Party::Prover && !witness_) witness_ = *w;
  if (const auto* q = as<msg::ProveQuery>(m); q && m.from == Party::Verifier && !query_) query_ = *q;
  if (!witness_ || !query_ || done_) return {};
  done_ = true;
  if (witness_->ad != query_->ad || witness_->h != query_->h) return {};
  try {
    const StatementInstance inst = instantiate(query_->ad, query_->h, witness_->trail);
    if (!statements::check(inst).satisfied) return {};
  } catch (const Error&) {
    return {};
  }
  return {make(Party::Functionality, Party::Verifier, m.sid, msg::Proven{})};
}

// ---- scenarios and tampering ----

Corruption Scenario::corruption() const {
  if (prover && verifier) throw Error(ErrorCode::InvalidScenario, "at most one of Prover and Verifier may be corrupted");
  if (prover) return Corruption::Prover;
  if (verifier) return Corruption::Verifier;
  return Corruption::None;
}

namespace tamper {

namespace {
template <class T, class F>
TamperSpec rewrite(F f) {
  return [f](const Message& m) -> std::vector<Message> {
    Message out = m;
    if (auto* p = std::get_if<T>(&out.payload)) f(*p);
    return {out};
  };
}
}  // namespace

TamperSpec identity() {
  return [](const Message& m) { return std::vector<Message>{m}; };
}

TamperSpec replace_trail_point(std::size_t index, Point p) {
  return rewrite<msg::ProveWitness>([index, p](msg::ProveWitness& w) {
    if (index < w.trail.size()) w.trail[index] = p;
  });
}

TamperSpec substitute_trail(std::vector<Point> trail, std::optional<AuthorityData> rehash_under) {
  std::optional<FieldElement> h;
  if (rehash_under) h = trail_digest(*rehash_under, trail);
  return [trail, h](const Message& m) -> std::vector<Message> {
    Message out = m;
    if (auto* w = std::get_if<msg::ProveWitness>(&out.payload)) {
      w->trail = trail;
      if (h) w->h = *h;
    }
    if (auto* s = std::get_if<msg::Sig>(&out.payload); s && h) s->h = *h;
    return {out};
  };
}

TamperSpec replace_statement_ad(AuthorityData ad) {
  return [ad](const Message& m) -> std::vector<Message> {
    Message out = m;
    if (auto* w = std::get_if<msg::ProveWitness>(&out.payload)) w->ad = ad;
    if (auto* q = std::get_if<msg::ProveQuery>(&out.payload)) q->ad = ad;
    return {out};
  };
}

TamperSpec force_result(bool ok) {
  return rewrite<msg::Result>([ok](msg::Result& r) { r.ok = ok; });
}

TamperSpec drop(std::string kind) {
  return [kind](const Message& m) -> std::vector<Message> {
    if (kind == payload_kind(m.payload)) return {};
    return {m};
  };
}

TamperSpec compose(TamperSpec first, TamperSpec second) {
  return [first, second](const Message& m) {
    std::vector<Message> out;
    for (const Message& x : first(m)) {
      for (Message& y : second(x)) out.push_back(std::move(y));
    }
    return out;
  };
}

}  // namespace tamper

// ---- scheduler ----

SessionInputs session_inputs(const StatementInstance& inst, SessionId sid) {
  SessionInputs in;
  in.sid = std::move(sid);
  in.ad_p = authority_data(inst);
  in.ad_v = in.ad_p;
  std::visit(
      [&](const auto& i) {
        in.moves.assign(i.trail.points.begin(),
                        i.trail.points.begin() + static_cast<std::ptrdiff_t>(std::min(i.trail.declared_len, i.trail.points.size())));
      },
      inst);
  return in;
}

namespace {

class Scheduler {
 public:
  Scheduler(const Scenario& scenario, const SessionInputs& inputs, const SignatureScheme& scheme)
      : corruption_(scenario.corruption()),
        tamper_(corruption_ == Corruption::Prover     ? scenario.prover
                : corruption_ == Corruption::Verifier ? scenario.verifier
                                                      : std::nullopt),
        witness_(scheme, HashSpec{inputs.ad_p.field, inputs.ad_p.pp, inputs.ad_p.n_traj}, inputs.key_seed),
        prover_(scheme, corruption_ == Corruption::Prover),
        verifier_(scheme, corruption_ == Corruption::Verifier) {
    transcript_.sid = inputs.sid;
    transcript_.corruption = corruption_;
    transcript_.scheme = scheme.name();
  }

  void stimulus(Message m) {
    emit(std::move(m));
    drain();
  }

  SessionTranscript finish() {
    for (auto& m : prover_.finish()) emit(std::move(m));
    for (auto& m : verifier_.finish()) emit(std::move(m));
    drain();
    return std::move(transcript_);
  }

 private:
  bool corrupted(Party p) const {
    return (p == Party::Prover && corruption_ == Corruption::Prover) ||
           (p == Party::Verifier && corruption_ == Corruption::Verifier);
  }

  void record(const Message& m, bool tampered, bool dropped) {
    transcript_.entries.push_back({transcript_.entries.size(), m, tampered, dropped});
    if (!dropped) queue_.push_back(m);
  }

  void emit(Message m) {
    if (!corrupted(m.from) || m.to == Party::Adversary || !tamper_) {
      record(m, false, false);
      return;
    }
    const std::vector<Message> outs = (*tamper_)(m);
    if (outs.size() == 1 && outs.front() == m) {
      record(m, false, false);
    } else if (outs.empty()) {
      record(m, false, true);
    } else {
      for (const Message& o : outs) record(o, true, false);
    }
  }

  void drain() {
    while (!queue_.empty()) {
      const Message m = std::move(queue_.front());
      queue_.pop_front();
      std::vector<Message> outs;
      switch (m.to) {
        case Party::Environment:
          if (const auto* r = std::get_if<msg::Result>(&m.payload)) {
            if (m.from == Party::Prover && !prover_out_) prover_out_ = transcript_.prover_ok = r->ok;
            if (m.from == Party::Verifier && !verifier_out_) verifier_out_ = transcript_.verifier_ok = r->ok;
          }
          break;
        case Party::Adversary:
          break;
        case Party::Witness:
          outs = witness_.handle(m);
          break;
        case Party::Prover: {
          ScopedAccessContext ctx(AccessContext::Prover);
          outs = prover_.handle(m);
          break;
        }
        case Party::Verifier: {
          ScopedAccessContext ctx(AccessContext::Verifier);
          outs = verifier_.handle(m);
          break;
        }
        case Party::Functionality: {
          ScopedAccessContext ctx(AccessContext::Functionality);
          outs = zk_.handle(m);
          break;
        }
      }
      for (auto& o : outs) emit(std::move(o));
    }
  }

  Corruption corruption_;
  std::optional<TamperSpec> tamper_;
  WitnessDevice witness_;
  ProverMachine prover_;
  VerifierMachine verifier_;
  ZkFunctionality zk_;
  std::deque<Message> queue_;
  SessionTranscript transcript_;
  std::optional<bool> prover_out_, verifier_out_;
};

}  // namespace

SessionTranscript run_session(const Scenario& scenario, const SessionInputs& inputs, const SignatureScheme& scheme) {
  if (inputs.moves.empty()) throw Error(ErrorCode::InvalidScenario, "session needs at least one move");
  if (inputs.moves.size() > inputs.ad_p.n_traj) {
    throw Error(ErrorCode::InvalidScenario, "more moves than n_traj");
  }
  Scheduler sched(scenario, inputs, scheme);
  const SessionId& sid = inputs.sid;
  sched.stimulus(make(Party::Environment, Party::Witness, sid, msg::Init{}));
  for (const Point& p : inputs.moves) sched.stimulus(make(Party::Environment, Party::Witness, sid, msg::Move{p}));
  sched.stimulus(make(Party::Environment, Party::Prover, sid, msg::Prove{inputs.ad_p}));
  sched.stimulus(make(Party::Environment, Party::Verifier, sid, msg::Verify{inputs.ad_v}));
  return sched.finish();
}

json to_json(const SessionTranscript& t) {
  json msgs = json::array();
  for (const auto& e : t.entries) {
    json j = {{"seq", std::to_string(e.seq)},
              {"from", party_name(e.message.from)},
              {"to", party_name(e.message.to)},
              {"kind", payload_kind(e.message.payload)},
              {"sid", e.message.sid},
              {"body", body(e.message.payload)}};
    if (e.tampered) j["tampered"] = true;
    if (e.dropped) j["dropped"] = true;
    msgs.push_back(std::move(j));
  }
  return {{"schema_version", std::to_string(codec::kSchemaVersion)},
          {"sid", t.sid},
          {"corrupted", corruption_name(t.corruption)},
          {"signature_scheme", t.scheme},
          {"messages", msgs},
          {"outputs", {{"prover", result_name(t.prover_ok)}, {"verifier", result_name(t.verifier_ok)}}}};
}

// ---- ideal functionality ----

IdealResult ideal_functionality(Corruption corruption, const SessionInputs& inputs, const AdversaryChoices& choices) {
  IdealResult r;
  const auto& s = inputs.moves;
  r.h = trail_digest(inputs.ad_p, s);
  r.prover_ok = relation(s, inputs.ad_p);
  r.verifier_ok = inputs.ad_p == inputs.ad_v && relation(s, inputs.ad_v);
  if (corruption == Corruption::Prover) {
    r.leaked_trail = s;
    r.prover_ok = choices.prover_output.value_or(r.prover_ok);
    if (!choices.proceed) r.verifier_ok = false;
  }
  if (corruption == Corruption::Verifier) r.verifier_ok = choices.verifier_output.value_or(r.verifier_ok);
  return r;
}

AdversaryChoices extract_choices(const SessionTranscript& real, const SessionInputs& inputs,
                                 const SignatureScheme& scheme) {
  AdversaryChoices c;
  c.prover_output = real.prover_ok;
  c.verifier_output = real.verifier_ok;
  if (real.corruption != Corruption::Prover) return c;

  const msg::ProveWitness* pw = nullptr;
  const msg::Sig* sig = nullptr;
  const msg::WitPk* pk = nullptr;
  for (const auto& e : real.entries) {
    if (e.dropped) continue;
    const Message& m = e.message;
    if (!pw && m.from == Party::Prover && m.to == Party::Functionality) pw = std::get_if<msg::ProveWitness>(&m.payload);
    if (!sig && m.from == Party::Prover && m.to == Party::Verifier) sig = std::get_if<msg::Sig>(&m.payload);
    if (!pk && m.from == Party::Witness) pk = std::get_if<msg::WitPk>(&m.payload);
  }
  const auto h = trail_digest(inputs.ad_p, inputs.moves);
  c.proceed = pw && sig && pk && h && pw->ad == inputs.ad_p && pw->trail == inputs.moves && pw->h == *h &&
              sig->h == *h && scheme.verify(pk->pk, signing_bytes(real.sid, *h), sig->sigma);
  return c;
}

}  // namespace zkpol::protocol
