#include "zkpol/circuit.hpp"

#include <string>

namespace zkpol {

namespace {

thread_local AccessContext g_context = AccessContext::Prover;
std::atomic<std::size_t> g_verifier_reads{0};

}  // namespace

const char* domain_name(Domain d) noexcept {
  switch (d) {
    case Domain::Public: return "public";
    case Domain::Shared: return "shared";
    case Domain::ProverOnly: return "prover";
  }
  return "?";
}

ScopedAccessContext::ScopedAccessContext(AccessContext ctx) : previous_(g_context) { g_context = ctx; }
ScopedAccessContext::~ScopedAccessContext() { g_context = previous_; }
AccessContext ScopedAccessContext::current() noexcept { return g_context; }

namespace witness_audit {
std::size_t verifier_prover_only_reads() noexcept { return g_verifier_reads.load(); }
void reset() noexcept { g_verifier_reads.store(0); }
}  // namespace witness_audit

ConstraintSystem::ConstraintSystem(Field field) : field_(std::move(field)) {}

void ConstraintSystem::check_operand(Wire w) const {
  if (w.stage != Stage::Circuit) throw Error(ErrorCode::StageViolation, "local-stage value used as a gate operand");
  if (w.id >= gates_.size()) throw Error(ErrorCode::UnknownWire, "wire " + std::to_string(w.id) + " does not exist");
}

Wire ConstraintSystem::push(Gate g, FieldElement value) {
  const auto id = static_cast<std::uint32_t>(gates_.size());
  gates_.push_back(g);
  values_.push_back(value);
  input_missing_.push_back(false);
  return Wire{id, g.domain, Stage::Circuit};
}

Wire ConstraintSystem::input(FieldElement value, Domain domain) {
  if (domain == Domain::Public) {
    throw Error(ErrorCode::PublicNeedsNoWire, "public constants enter the circuit through constant()");
  }
  if (domain == Domain::ProverOnly) ++counters_.n_prover_inputs;
  else ++counters_.n_shared_inputs;
  return push(Gate{GateKind::Input, domain}, field_.element(value.value));
}

Wire ConstraintSystem::input_placeholder(Domain domain) {
  Wire w = input(FieldElement{}, domain);
  input_missing_[w.id] = true;
  return w;
}

Wire ConstraintSystem::constant(FieldElement value) {
  Gate g{GateKind::Const, Domain::Public};
  g.constant = field_.element(value.value);
  return push(g, g.constant);
}

Wire ConstraintSystem::add(Wire a, Wire b) { return gate(ArithKind::Add, a, b); }
Wire ConstraintSystem::sub(Wire a, Wire b) { return gate(ArithKind::Sub, a, b); }
Wire ConstraintSystem::mul(Wire a, Wire b) { return gate(ArithKind::Mul, a, b); }

Wire ConstraintSystem::gate(ArithKind kind, Wire a, Wire b) {
  check_operand(a);
  check_operand(b);
  Gate g{};
  g.domain = join(gates_[a.id].domain, gates_[b.id].domain);
  g.a = a.id;
  g.b = b.id;
  switch (kind) {
    case ArithKind::Add: g.kind = GateKind::Add; ++counters_.n_add; break;
    case ArithKind::Sub: g.kind = GateKind::Sub; ++counters_.n_add; break;
    case ArithKind::Mul: g.kind = GateKind::Mul; ++counters_.n_mul; break;
  }
  return push(g, field_.arith(kind, values_[a.id], values_[b.id]));
}

Wire ConstraintSystem::affine(std::span<const AffineTerm> terms, FieldElement constant) {
  Gate g{GateKind::Affine, Domain::Public};
  g.terms_begin = static_cast<std::uint32_t>(terms_.size());
  g.terms_count = static_cast<std::uint32_t>(terms.size());
  g.constant = field_.element(constant.value);
  FieldElement acc = g.constant;
  for (const AffineTerm& t : terms) {
    check_operand(t.wire);
    g.domain = join(g.domain, gates_[t.wire.id].domain);
    const FieldElement c = field_.element(t.coeff.value);
    terms_.push_back(StoredTerm{c, t.wire.id});
    acc = field_.add(acc, field_.mul(c, values_[t.wire.id]));
  }
  if (terms.size() > 1) counters_.n_add += terms.size() - 1;
  return push(g, acc);
}

Wire ConstraintSystem::add_constant(Wire a, FieldElement c) {
  const AffineTerm t{field_.one(), a};
  return affine(std::span(&t, 1), c);
}

Wire ConstraintSystem::scale(Wire a, FieldElement c) {
  const AffineTerm t{c, a};
  return affine(std::span(&t, 1));
}

void ConstraintSystem::assert_eq(Wire a, Wire b) {
  check_operand(a);
  check_operand(b);
  assertions_.push_back(Assertion{a.id, b.id});
  ++counters_.n_assert;
}

void ConstraintSystem::assert_zero(Wire a) {
  check_operand(a);
  assertions_.push_back(Assertion{a.id, Wire::kInvalid});
  ++counters_.n_assert;
}

void ConstraintSystem::assert_equals_constant(Wire a, FieldElement c) {
  if (c.value == 0) {
    assert_zero(a);
    return;
  }
  assert_eq(a, constant(c));
}

Wire ConstraintSystem::oblivious_choice(Wire b, Wire x, Wire y) {
  const Wire diff = sub(x, y);
  return add(y, mul(b, diff));
}

void ConstraintSystem::record_read(std::uint32_t id) const {
  if (g_context == AccessContext::Verifier && gates_[id].domain == Domain::ProverOnly) {
    g_verifier_reads.fetch_add(1);
  }
}

FieldElement ConstraintSystem::value(Wire w) const {
  check_operand(w);
  record_read(w.id);
  return values_[w.id];
}

void ConstraintSystem::set_input(Wire w, FieldElement value) {
  check_operand(w);
  if (gates_[w.id].kind != GateKind::Input) {
    throw Error(ErrorCode::UnknownWire, "wire " + std::to_string(w.id) + " is not an input");
  }
  values_[w.id] = field_.element(value.value);
  input_missing_[w.id] = false;
}

bool ConstraintSystem::is_input(Wire w) const {
  return w.stage == Stage::Circuit && w.id < gates_.size() && gates_[w.id].kind == GateKind::Input;
}

std::vector<Wire> ConstraintSystem::inputs(Domain domain) const {
  std::vector<Wire> out;
  for (std::uint32_t i = 0; i < gates_.size(); ++i) {
    if (gates_[i].kind == GateKind::Input && gates_[i].domain == domain) {
      out.push_back(Wire{i, domain, Stage::Circuit});
    }
  }
  return out;
}

Wire ConstraintSystem::wire_at(std::uint32_t id) const {
  if (id >= gates_.size()) throw Error(ErrorCode::UnknownWire, "wire " + std::to_string(id) + " does not exist");
  return Wire{id, gates_[id].domain, Stage::Circuit};
}

FieldElement ConstraintSystem::eval_gate(const Gate& g, const std::vector<FieldElement>& vals) const {
  switch (g.kind) {
    case GateKind::Input: return {};  // handled by caller
    case GateKind::Const: return g.constant;
    case GateKind::Add: return field_.add(vals[g.a], vals[g.b]);
    case GateKind::Sub: return field_.sub(vals[g.a], vals[g.b]);
    case GateKind::Mul: return field_.mul(vals[g.a], vals[g.b]);
    case GateKind::Affine: {
      FieldElement acc = g.constant;
      for (std::uint32_t k = 0; k < g.terms_count; ++k) {
        const StoredTerm& t = terms_[g.terms_begin + k];
        acc = field_.add(acc, field_.mul(t.coeff, vals[t.wire]));
      }
      return acc;
    }
  }
  return {};
}

SatisfactionReport ConstraintSystem::evaluate_and_check() {
  for (std::uint32_t i = 0; i < gates_.size(); ++i) {
    if (gates_[i].kind == GateKind::Input && input_missing_[i]) {
      throw Error(ErrorCode::IncompleteWitness, "input wire " + std::to_string(i) + " has no witness value");
    }
  }
  // Gates only reference earlier wires, so creation order is a topological order.
  for (std::uint32_t i = 0; i < gates_.size(); ++i) {
    if (gates_[i].kind != GateKind::Input) values_[i] = eval_gate(gates_[i], values_);
  }
  SatisfactionReport report;
  report.counters = counters_;
  for (std::size_t k = 0; k < assertions_.size(); ++k) {
    const Assertion& a = assertions_[k];
    const FieldElement rhs = a.rhs == Wire::kInvalid ? FieldElement{} : values_[a.rhs];
    if (values_[a.lhs] != rhs) {
      report.satisfied = false;
      report.first_failed_assertion = k;
      break;
    }
  }
  return report;
}

bool ConstraintSystem::domains_monotone() const {
  for (const Gate& g : gates_) {
    switch (g.kind) {
      case GateKind::Input:
      case GateKind::Const: break;
      case GateKind::Add:
      case GateKind::Sub:
      case GateKind::Mul:
        if (g.domain < gates_[g.a].domain || g.domain < gates_[g.b].domain) return false;
        break;
      case GateKind::Affine:
        for (std::uint32_t k = 0; k < g.terms_count; ++k) {
          if (g.domain < gates_[terms_[g.terms_begin + k].wire].domain) return false;
        }
        break;
    }
  }
  return true;
}

}  // namespace zkpol
