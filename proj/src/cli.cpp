#include <algorithm>
#include <fstream>
#include <ostream>
#include <random>

#include "CLI11.hpp"
#include "zkpol/appio.hpp"
#include "zkpol/codec.hpp"
#include "zkpol/protocol.hpp"

namespace zkpol::appio {

namespace {

using json = nlohmann::ordered_json;

constexpr int kOk = 0;
constexpr int kUnsatisfied = 1;
constexpr int kUsage = 2;
constexpr int kInternal = 3;

json report_record(StatementKind kind, const SatisfactionReport& r) {
  json j = {{"kind", statement_kind_name(kind)},
            {"satisfied", r.satisfied},
            {"first_failed_assertion", nullptr},
            {"n_mul", r.counters.n_mul},
            {"n_add", r.counters.n_add},
            {"n_assert", r.counters.n_assert},
            {"n_prover_inputs", r.counters.n_prover_inputs},
            {"n_shared_inputs", r.counters.n_shared_inputs}};
  if (r.first_failed_assertion) j["first_failed_assertion"] = *r.first_failed_assertion;
  return j;
}

int cmd_check(const std::string& path, std::ostream& out) {
  const auto inst = load_instance(path);
  const auto report = statements::check(inst);
  out << report_record(kind_of(inst), report).dump() << "\n";
  return report.satisfied ? kOk : kUnsatisfied;
}

int cmd_oracle(const std::string& path, std::ostream& out) {
  const auto inst = load_instance(path);
  const bool verdict = statements::oracle(inst);
  out << json{{"kind", statement_kind_name(kind_of(inst))}, {"oracle", verdict}}.dump() << "\n";
  return verdict ? kOk : kUnsatisfied;
}

Trail& trail_of(StatementInstance& inst) {
  return std::visit([](auto& in) -> Trail& { return in.trail; }, inst);
}

// Two kinds of mutation, alternating:
//  - a ProverOnly input wire gets a fresh random field element; the circuit
//    must reject (the honest witness is the only one for these wires);
//  - one real trail coordinate moves; under the old h_ex the circuit must
//    reject, and with h_ex recomputed it must agree with the oracle.
int cmd_fuzz(const std::string& path, std::size_t mutations, std::uint64_t seed, std::ostream& out) {
  const auto inst = load_instance(path);
  const Field field = std::visit([](const auto& in) { return in.field; }, inst);
  std::mt19937_64 rng(seed);
  std::size_t violations = 0, wire_mutations = 0, trail_mutations = 0;

  const bool verdict = statements::oracle(inst);
  if (statements::check(inst).satisfied != verdict) ++violations;

  ConstraintSystem cs{field};
  statements::build(inst, cs);
  const auto prover_inputs = cs.inputs(Domain::ProverOnly);

  for (std::size_t i = 0; i < mutations; ++i) {
    if (i % 2 == 0 && !prover_inputs.empty()) {
      ++wire_mutations;
      const Wire w = prover_inputs[rng() % prover_inputs.size()];
      const FieldElement orig = cs.value(w);
      FieldElement v;
      do {
        v = field.element((u128{rng()} << 64 | rng()) % field.modulus());
      } while (v == orig);
      cs.set_input(w, v);
      if (cs.evaluate_and_check().satisfied) ++violations;
      cs.set_input(w, orig);
    } else {
      ++trail_mutations;
      StatementInstance mutated = inst;
      Trail& t = trail_of(mutated);
      const std::size_t idx = rng() % t.declared_len;
      const Coord bound = Coord{1} << field.coord_bits();
      Coord& c = rng() % 2 ? t.points[idx].x : t.points[idx].y;
      const Coord old = c;
      do {
        c = static_cast<Coord>(rng() % static_cast<std::uint64_t>(bound));
      } while (c == old);
      if (idx + 1 == t.declared_len) {
        for (std::size_t j = idx + 1; j < t.points.size(); ++j) t.points[j] = t.points[idx];
      }
      bool valid = true;
      try {
        std::visit([](const auto& in) { statements::validate(in); }, mutated);
      } catch (const Error&) {
        valid = false;  // e.g. the moved point left the tax region
      }
      if (!valid) continue;
      if (statements::check(mutated).satisfied) ++violations;
      std::visit([](auto& in) { in.h_ex = statements::trail_hash(in.field, in.pp, in.trail, in.n_traj); }, mutated);
      if (statements::check(mutated).satisfied != statements::oracle(mutated)) ++violations;
    }
  }
  out << json{{"oracle", verdict},
              {"mutations", mutations},
              {"wire_mutations", wire_mutations},
              {"trail_mutations", trail_mutations},
              {"violations", violations}}
             .dump()
      << "\n";
  return violations == 0 ? kOk : kInternal;
}

int cmd_cost(const std::string& kind, std::size_t n_traj, std::size_t n_geo, bool csv, std::ostream& out) {
  const StatementKind k = kind == "ev" ? StatementKind::Ev : StatementKind::Tax;
  const Field field;
  const auto pp = PoseidonParams::derive(field);
  const Counters c = statements::statement_cost(k, n_traj, n_geo, field, pp);
  if (csv) {
    out << "kind,n_traj,n_geo,n_mul,n_add,n_assert,n_prover_inputs\n";
    out << kind << ',' << n_traj << ',' << n_geo << ',' << c.n_mul << ',' << c.n_add << ',' << c.n_assert << ','
        << c.n_prover_inputs << "\n";
  } else {
    out << "kind             " << kind << "\n"
        << "n_traj           " << n_traj << "\n"
        << "n_geo            " << n_geo << "\n"
        << "n_mul            " << c.n_mul << "\n"
        << "n_add            " << c.n_add << "\n"
        << "n_assert         " << c.n_assert << "\n"
        << "n_prover_inputs  " << c.n_prover_inputs << "\n"
        << "n_shared_inputs  " << c.n_shared_inputs << "\n";
  }
  return kOk;
}

int cmd_session(const std::string& scenario_name, const std::string& instance_path, const std::string& sid,
                std::ostream& out) {
  const StatementInstance inst =
      instance_path.empty()
          ? gen_fixture(FixtureSpec{1, StatementKind::Ev, 8, 2, 256, FixtureMode::Compliant, {}, {}, {}})
          : load_instance(instance_path);
  const auto inputs = protocol::session_inputs(inst, sid);
  protocol::Scenario scenario;
  if (scenario_name == "corrupt-prover") {
    Point p = inputs.moves.front();
    p.x = p.x == 0 ? 1 : p.x - 1;
    scenario = protocol::Scenario::corrupt_prover(protocol::tamper::replace_trail_point(0, p));
  } else if (scenario_name == "corrupt-verifier") {
    protocol::AuthorityData ad = inputs.ad_v;
    ad.subsidy.d_req += 1;
    ad.tax.d_max += 1;
    scenario = protocol::Scenario::corrupt_verifier(protocol::tamper::replace_statement_ad(ad));
  }
  const auto transcript = protocol::run_session(scenario, inputs);
  out << protocol::to_json(transcript).dump(2) << "\n";
  const auto ideal = protocol::ideal_functionality(transcript.corruption, inputs,
                                                   protocol::extract_choices(transcript, inputs));
  return ideal.prover_ok == transcript.prover_ok && ideal.verifier_ok == transcript.verifier_ok ? kOk : kInternal;
}

int cmd_gen(const std::string& spec_path, const std::string& out_path, std::ostream& out) {
  std::ifstream in(spec_path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot read " + spec_path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, spec_path + ": invalid JSON: " + e.what());
  }
  const auto inst = gen_fixture(parse_fixture_spec(j));
  if (out_path.empty()) {
    out << serialize_instance(inst);
  } else {
    save_instance(out_path, inst);
  }
  return kOk;
}

// Prints the derived parameters, or compares a parameter document with them:
// exit 1 when the document's constants are not the ones its seed derives.
int cmd_params(const std::string& check_path, std::ostream& out) {
  if (check_path.empty()) {
    const Field field;
    out << codec::write_params(field, PoseidonParams::derive(field)).dump(2) << "\n";
    return kOk;
  }
  std::ifstream in(check_path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot read " + check_path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, check_path + ": invalid JSON: " + e.what());
  }
  const auto [field, pp] = codec::read_params(j);
  const bool same = PoseidonParams::derive(field, pp.seed, pp.t, pp.alpha, pp.r_full, pp.r_partial) == pp;
  out << json{{"derived", same}}.dump() << "\n";
  return same ? kOk : kUnsatisfied;
}

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::ParseError:
    case ErrorCode::InstanceError:
    case ErrorCode::InvalidParams:
    case ErrorCode::GenerationFailed:
    case ErrorCode::Unsupported:
    case ErrorCode::InvalidScenario:
    case ErrorCode::OutOfRange:
      return kUsage;
    default:
      return kInternal;
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Policy-compliance statements over location trails", "zkpol"};
  app.require_subcommand(1);

  std::string instance, spec_path, out_path, params_check, kind = "ev", scenario = "honest", sid = "session-0";
  std::size_t mutations = 100, n_traj = 0, n_circ = 0, n_tri = 0;
  std::uint64_t seed = 1;
  bool csv = false;

  auto* check = app.add_subcommand("check", "build the statement circuit and check it");
  check->add_option("instance", instance, "instance JSON")->required();
  auto* oracle = app.add_subcommand("oracle", "plaintext policy verdict");
  oracle->add_option("instance", instance, "instance JSON")->required();
  auto* fuzz = app.add_subcommand("fuzz", "witness and trail mutation battery");
  fuzz->add_option("instance", instance, "instance JSON")->required();
  fuzz->add_option("--mutations", mutations, "number of mutations")->check(CLI::Range(std::size_t{0}, std::size_t{1} << 20));
  fuzz->add_option("--seed", seed, "mutation RNG seed");
  auto* cost = app.add_subcommand("cost", "constraint counters for a statement size");
  cost->add_option("--kind", kind, "ev or tax")->check(CLI::IsMember({"ev", "tax"}))->required();
  cost->add_option("--n-traj", n_traj, "trail length")->required()->check(CLI::Range(std::size_t{1}, std::size_t{1} << 16));
  auto* circ_opt = cost->add_option("--n-circ", n_circ, "number of circles (ev)")->check(CLI::Range(std::size_t{1}, std::size_t{4096}));
  auto* tri_opt = cost->add_option("--n-tri", n_tri, "number of triangles (tax)")->check(CLI::Range(std::size_t{1}, std::size_t{4096}));
  circ_opt->excludes(tri_opt);
  cost->add_flag("--csv", csv, "CSV output");
  auto* session = app.add_subcommand("session", "run a protocol session and print its transcript");
  session->add_option("--scenario", scenario, "honest, corrupt-prover or corrupt-verifier")
      ->check(CLI::IsMember({"honest", "corrupt-prover", "corrupt-verifier"}));
  session->add_option("--instance", instance, "instance JSON (default: a small compliant subsidy fixture)");
  session->add_option("--sid", sid, "session identifier");
  auto* gen = app.add_subcommand("gen", "generate a fixture from a spec");
  gen->add_option("spec", spec_path, "fixture spec JSON")->required();
  gen->add_option("-o,--output", out_path, "write the instance here instead of stdout");

  auto* params = app.add_subcommand("params", "print the derived field and Poseidon parameters");
  params->add_option("--check", params_check, "compare a parameter document with the derivation");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*check) return cmd_check(instance, out);
    if (*oracle) return cmd_oracle(instance, out);
    if (*fuzz) return cmd_fuzz(instance, mutations, seed, out);
    if (*cost) {
      const bool ev = kind == "ev";
      if ((ev && !*circ_opt) || (!ev && !*tri_opt)) {
        err << "cost: --kind " << kind << " needs " << (ev ? "--n-circ" : "--n-tri") << "\n";
        return kUsage;
      }
      return cmd_cost(kind, n_traj, ev ? n_circ : n_tri, csv, out);
    }
    if (*session) return cmd_session(scenario, instance, sid, out);
    if (*gen) return cmd_gen(spec_path, out_path, out);
    if (*params) return cmd_params(params_check, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kUsage;
}

}  // namespace zkpol::appio
