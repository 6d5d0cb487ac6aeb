#pragma once

#include <deque>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "zkpol/signature.hpp"
#include "zkpol/statements.hpp"

/// Executable model of the real system: Witness device, Prover, Verifier and
/// the zero-knowledge functionality, driven by a deterministic scheduler.
/// The functionality is realized by building the statement circuit and
/// checking it (no cryptographic proof).
namespace zkpol::protocol {

using SessionId = std::string;
using json = nlohmann::ordered_json;

/// Everything the Verifier knows about the statement; no trail material.
struct AuthorityData {
  StatementKind kind = StatementKind::Ev;
  Field field;
  PoseidonParams pp;
  std::size_t n_traj = 0;
  SubsidyPolicy subsidy;
  CircleSet circles;
  TaxPolicy tax;
  TriangleSet triangles;
  std::optional<Rect> region;

  friend bool operator==(const AuthorityData&, const AuthorityData&) = default;
};

AuthorityData authority_data(const StatementInstance& inst);
/// The statement instance for authority data, a claimed digest and a trail.
StatementInstance instantiate(const AuthorityData& ad, FieldElement h, std::vector<Point> trail);
/// H(S): Poseidon digest of the trail padded to ad.n_traj. nullopt when the
/// trail cannot be hashed under ad (empty, too long, coordinate out of range).
std::optional<FieldElement> trail_digest(const AuthorityData& ad, const std::vector<Point>& trail);
/// The policy relation R(S, AD), evaluated in plaintext. Invalid inputs are false.
bool relation(const std::vector<Point>& trail, const AuthorityData& ad);
json to_json(const AuthorityData& ad);

/// Bytes covered by the device signature:
///   be32(len(sid)) || sid || be32(16) || be128(h)
Bytes signing_bytes(const SessionId& sid, FieldElement h);

enum class Party { Environment, Witness, Prover, Verifier, Functionality, Adversary };
const char* party_name(Party p) noexcept;

namespace msg {
struct Init {
  friend bool operator==(const Init&, const Init&) = default;
};
struct Move {
  Point p;
  friend bool operator==(const Move&, const Move&) = default;
};
struct GetCoords {
  friend bool operator==(const GetCoords&, const GetCoords&) = default;
};
struct Coords {
  std::vector<Point> trail;
  Bytes sigma;
  friend bool operator==(const Coords&, const Coords&) = default;
};
struct WitPk {
  Bytes pk;
  friend bool operator==(const WitPk&, const WitPk&) = default;
};
struct Prove {
  AuthorityData ad;
  friend bool operator==(const Prove&, const Prove&) = default;
};
struct Verify {
  AuthorityData ad;
  friend bool operator==(const Verify&, const Verify&) = default;
};
struct Sig {
  FieldElement h;
  Bytes sigma;
  friend bool operator==(const Sig&, const Sig&) = default;
};
/// prove!: statement (ad, h) and witness trail, Prover to functionality.
struct ProveWitness {
  AuthorityData ad;
  FieldElement h;
  std::vector<Point> trail;
  friend bool operator==(const ProveWitness&, const ProveWitness&) = default;
};
/// prove?: statement (ad, h), Verifier to functionality.
struct ProveQuery {
  AuthorityData ad;
  FieldElement h;
  friend bool operator==(const ProveQuery&, const ProveQuery&) = default;
};
struct Proven {
  friend bool operator==(const Proven&, const Proven&) = default;
};
/// ok / not_ok to the environment.
struct Result {
  bool ok = false;
  friend bool operator==(const Result&, const Result&) = default;
};
/// What a corrupted party hands to the adversary.
struct Leak {
  json values;
  friend bool operator==(const Leak&, const Leak&) = default;
};
}  // namespace msg

using Payload = std::variant<msg::Init, msg::Move, msg::GetCoords, msg::Coords, msg::WitPk, msg::Prove, msg::Verify,
                             msg::Sig, msg::ProveWitness, msg::ProveQuery, msg::Proven, msg::Result, msg::Leak>;
const char* payload_kind(const Payload& p) noexcept;

struct Message {
  Party from = Party::Environment;
  Party to = Party::Environment;
  SessionId sid;
  Payload payload;
  friend bool operator==(const Message&, const Message&) = default;
};

/// Hash parameters shared by all machines.
struct HashSpec {
  Field field;
  PoseidonParams pp;
  std::size_t n_traj = 0;
};

class WitnessDevice {
 public:
  WitnessDevice(const SignatureScheme& scheme, HashSpec hash, Bytes key_seed);
  /// init(sid), move(sid, p) from the environment; getcoords(sid) from the
  /// Prover. Anything before init throws ProtocolOrderViolation, as does
  /// getcoords on an empty log or a move beyond n_traj points.
  std::vector<Message> handle(const Message& m);

  const std::vector<Point>& log() const noexcept { return log_; }
  const Bytes& public_key() const noexcept { return keys_.pk; }

 private:
  const SignatureScheme* scheme_;
  HashSpec hash_;
  Bytes key_seed_;
  KeyPair keys_;
  std::optional<SessionId> sid_;
  std::vector<Point> log_;
};

class ProverMachine {
 public:
  ProverMachine(const SignatureScheme& scheme, bool corrupted);
  std::vector<Message> handle(const Message& m);
  /// Messages owed at quiescence (not_ok if no verdict was reached).
  std::vector<Message> finish();

 private:
  const SignatureScheme* scheme_;
  bool corrupted_;
  std::optional<Bytes> pk_;
  std::optional<SessionId> sid_;
  std::optional<AuthorityData> ad_;
  bool done_ = false;
};

class VerifierMachine {
 public:
  VerifierMachine(const SignatureScheme& scheme, bool corrupted);
  std::vector<Message> handle(const Message& m);
  std::vector<Message> finish();

 private:
  std::vector<Message> progress();

  const SignatureScheme* scheme_;
  bool corrupted_;
  std::optional<Bytes> pk_;
  std::optional<SessionId> sid_;
  std::optional<AuthorityData> ad_;
  std::optional<msg::Sig> sig_;
  bool queried_ = false;
  bool done_ = false;
};

/// F_ZK stand-in: on matching prove! and prove? sends proven to the Verifier
/// iff the statements agree and the circuit is satisfied by the witness.
class ZkFunctionality {
 public:
  std::vector<Message> handle(const Message& m);

 private:
  std::optional<msg::ProveWitness> witness_;
  std::optional<msg::ProveQuery> query_;
  bool done_ = false;
};

/// Rewrites one outgoing message of a corrupted party into zero or more
/// messages. Must be a pure function of its argument.
using TamperSpec = std::function<std::vector<Message>(const Message&)>;

enum class Corruption { None, Prover, Verifier };
const char* corruption_name(Corruption c) noexcept;

struct Scenario {
  std::optional<TamperSpec> prover;
  std::optional<TamperSpec> verifier;

  static Scenario honest() { return {}; }
  static Scenario corrupt_prover(TamperSpec t) { return {std::move(t), std::nullopt}; }
  static Scenario corrupt_verifier(TamperSpec t) { return {std::nullopt, std::move(t)}; }
  /// Throws InvalidScenario when both parties are corrupted.
  Corruption corruption() const;
};

namespace tamper {
TamperSpec identity();
/// Replaces the trail point at `index` in the prove! witness; h and sigma untouched.
TamperSpec replace_trail_point(std::size_t index, Point p);
/// Replaces the whole witness trail. With rehash_under, the digest in prove!
/// and in the sig message is recomputed for the new trail (sigma is reused).
TamperSpec substitute_trail(std::vector<Point> trail, std::optional<AuthorityData> rehash_under);
/// Replaces the authority data in prove! (Prover) or prove? (Verifier).
TamperSpec replace_statement_ad(AuthorityData ad);
/// Forces the party's output to the environment.
TamperSpec force_result(bool ok);
/// Drops messages of the given kind.
TamperSpec drop(std::string kind);
/// Applies `second` to every output of `first`.
TamperSpec compose(TamperSpec first, TamperSpec second);
}  // namespace tamper

struct SessionInputs {
  SessionId sid = "session-0";
  std::vector<Point> moves;
  AuthorityData ad_p;
  AuthorityData ad_v;
  Bytes key_seed;  // empty: derived from sid
};

SessionInputs session_inputs(const StatementInstance& inst, SessionId sid);

struct TranscriptEntry {
  std::size_t seq = 0;
  Message message;
  bool tampered = false;
  bool dropped = false;
};

struct SessionTranscript {
  SessionId sid;
  Corruption corruption = Corruption::None;
  std::string scheme;
  std::vector<TranscriptEntry> entries;
  bool prover_ok = false;
  bool verifier_ok = false;
};

json to_json(const SessionTranscript& t);

/// Drives init, the moves, then prove and verify, running every message to
/// quiescence in FIFO order. Parties without a verdict at the end output not_ok.
/// Throws InvalidScenario for a doubly corrupted scenario, an empty trail or
/// more moves than ad_p.n_traj.
SessionTranscript run_session(const Scenario& scenario, const SessionInputs& inputs,
                              const SignatureScheme& scheme = default_signature_scheme());

/// Reference ideal functionality I.
struct AdversaryChoices {
  std::optional<bool> prover_output;    // used when the Prover is corrupted
  std::optional<bool> verifier_output;  // used when the Verifier is corrupted
  bool proceed = true;                  // corrupted Prover only
};

struct IdealResult {
  bool prover_ok = false;
  bool verifier_ok = false;
  std::optional<FieldElement> h;  // H(S) as revealed to the adversary
  std::optional<std::vector<Point>> leaked_trail;
};

IdealResult ideal_functionality(Corruption corruption, const SessionInputs& inputs, const AdversaryChoices& choices);

/// The simulator's reading of a real execution: the corrupted party's outputs
/// and whether its prove!/sig messages carry the true (AD_P, S, H(S), sigma).
AdversaryChoices extract_choices(const SessionTranscript& real, const SessionInputs& inputs,
                                 const SignatureScheme& scheme = default_signature_scheme());

}  // namespace zkpol::protocol
