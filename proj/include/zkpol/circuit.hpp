#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "zkpol/field.hpp"

namespace zkpol {

// Ordered by secrecy: combining values yields the most secret domain involved.
enum class Domain : std::uint8_t { Public = 0, Shared = 1, ProverOnly = 2 };

enum class Stage : std::uint8_t { Local, Circuit };

constexpr Domain join(Domain a, Domain b) noexcept { return a > b ? a : b; }

const char* domain_name(Domain d) noexcept;

/// Handle to a value inside a ConstraintSystem. A default-constructed Wire is
/// Local-stage and is rejected as a gate operand.
struct Wire {
  static constexpr std::uint32_t kInvalid = std::numeric_limits<std::uint32_t>::max();

  std::uint32_t id = kInvalid;
  Domain domain = Domain::ProverOnly;
  Stage stage = Stage::Local;
};

struct AffineTerm {
  FieldElement coeff;
  Wire wire;
};

enum class GateKind : std::uint8_t { Input, Const, Add, Sub, Mul, Affine };

struct Counters {
  std::size_t n_mul = 0;
  std::size_t n_add = 0;
  std::size_t n_assert = 0;
  std::size_t n_prover_inputs = 0;
  std::size_t n_shared_inputs = 0;

  friend bool operator==(const Counters&, const Counters&) = default;
};

struct SatisfactionReport {
  bool satisfied = true;
  std::optional<std::size_t> first_failed_assertion;
  Counters counters;
};

// Who is looking at witness values. Reads of ProverOnly values while the
// Verifier context is active are tallied by witness_audit.
enum class AccessContext : std::uint8_t { Prover, Verifier, Functionality };

class ScopedAccessContext {
 public:
  explicit ScopedAccessContext(AccessContext ctx);
  ~ScopedAccessContext();
  ScopedAccessContext(const ScopedAccessContext&) = delete;
  ScopedAccessContext& operator=(const ScopedAccessContext&) = delete;

  static AccessContext current() noexcept;

 private:
  AccessContext previous_;
};

namespace witness_audit {
std::size_t verifier_prover_only_reads() noexcept;
void reset() noexcept;
}  // namespace witness_audit

/// Append-only arithmetic circuit with an attached witness.
///
/// Every gate is evaluated eagerly as it is appended so gadgets can derive
/// prover-side helper values (bit decompositions, square roots) from the
/// current witness. evaluate_and_check() recomputes everything from the
/// input assignments, which is what mutation tests rely on.
class ConstraintSystem {
 public:
  explicit ConstraintSystem(Field field);

  const Field& field() const noexcept { return field_; }

  /// wire(v): new circuit input. Public values go through constant().
  Wire input(FieldElement value, Domain domain);
  /// Input whose value is not yet known; evaluate_and_check() throws until set.
  Wire input_placeholder(Domain domain);
  Wire constant(FieldElement value);
  Wire constant_signed(i128 value) { return constant(field_.from_signed(value)); }

  Wire add(Wire a, Wire b);
  Wire sub(Wire a, Wire b);
  Wire mul(Wire a, Wire b);
  Wire gate(ArithKind kind, Wire a, Wire b);
  /// sum(coeff_i * wire_i) + constant; counts as |terms| - 1 additions.
  Wire affine(std::span<const AffineTerm> terms, FieldElement constant = {});
  Wire add_constant(Wire a, FieldElement c);
  Wire scale(Wire a, FieldElement c);

  void assert_eq(Wire a, Wire b);
  void assert_zero(Wire a);
  void assert_equals_constant(Wire a, FieldElement c);

  /// b ? x : y as y + b*(x - y). b must be separately constrained to {0,1}.
  Wire oblivious_choice(Wire b, Wire x, Wire y);

  /// Prover-side view of a wire's current value.
  FieldElement value(Wire w) const;
  /// Replace an input's witness; later values are stale until evaluate_and_check().
  void set_input(Wire w, FieldElement value);
  bool is_input(Wire w) const;

  SatisfactionReport evaluate_and_check();

  const Counters& counters() const noexcept { return counters_; }
  std::size_t num_wires() const noexcept { return gates_.size(); }
  std::size_t num_assertions() const noexcept { return assertions_.size(); }
  std::vector<Wire> inputs(Domain domain) const;
  Wire wire_at(std::uint32_t id) const;

  /// No gate output is less secret than any of its operands.
  bool domains_monotone() const;

 private:
  struct Gate {
    GateKind kind;
    Domain domain;
    std::uint32_t a = Wire::kInvalid;
    std::uint32_t b = Wire::kInvalid;
    std::uint32_t terms_begin = 0;
    std::uint32_t terms_count = 0;
    FieldElement constant{};
  };
  struct Assertion {
    std::uint32_t lhs;
    std::uint32_t rhs;  // kInvalid means "== 0"
  };
  struct StoredTerm {
    FieldElement coeff;
    std::uint32_t wire;
  };

  void check_operand(Wire w) const;
  Wire push(Gate g, FieldElement value);
  FieldElement eval_gate(const Gate& g, const std::vector<FieldElement>& vals) const;
  void record_read(std::uint32_t id) const;

  Field field_;
  std::vector<Gate> gates_;
  std::vector<FieldElement> values_;
  std::vector<bool> input_missing_;
  std::vector<StoredTerm> terms_;
  std::vector<Assertion> assertions_;
  Counters counters_;
};

}  // namespace zkpol
