#include "zkpol/gadgets.hpp"

#include <string>

namespace zkpol::gadgets {

namespace {

FieldElement pow2(const Field& f, unsigned k) { return f.element(u128{1} << k); }

void require_width(const ConstraintSystem& cs, unsigned bits, const char* what) {
  // Shifted comparisons must not wrap around the modulus.
  if (bits + 1 >= cs.field().modulus_bits()) {
    throw Error(ErrorCode::InvalidParams, std::string(what) + ": width " + std::to_string(bits) +
                                              " too large for a " + std::to_string(cs.field().modulus_bits()) +
                                              "-bit field");
  }
}

}  // namespace

void assert_boolean(ConstraintSystem& cs, Wire w) {
  const Wire minus_one = cs.add_constant(w, cs.field().neg(cs.field().one()));
  cs.assert_zero(cs.mul(w, minus_one));
}

BitVector decompose_bits(ConstraintSystem& cs, Wire w, unsigned k) {
  if (k == 0 || k > 126) throw Error(ErrorCode::InvalidParams, "bit width must be in [1, 126]");
  const Field& f = cs.field();
  const u128 v = cs.value(w).value;
  BitVector out;
  out.width = k;
  out.bits.reserve(k);
  std::vector<AffineTerm> terms;
  terms.reserve(k + 1);
  for (unsigned i = 0; i < k; ++i) {
    const Wire bit = cs.input(FieldElement{(v >> i) & 1}, Domain::ProverOnly);
    assert_boolean(cs, bit);
    out.bits.push_back(bit);
    terms.push_back(AffineTerm{pow2(f, i), bit});
  }
  terms.push_back(AffineTerm{f.neg(f.one()), w});
  cs.assert_zero(cs.affine(terms));
  return out;
}

Wire boolean_and(ConstraintSystem& cs, Wire a, Wire b) { return cs.mul(a, b); }

Wire boolean_or(ConstraintSystem& cs, Wire a, Wire b) {
  const Field& f = cs.field();
  const Wire ab = cs.mul(a, b);
  const std::array<AffineTerm, 3> terms{AffineTerm{f.one(), a}, AffineTerm{f.one(), b}, AffineTerm{f.neg(f.one()), ab}};
  return cs.affine(terms);
}

Wire leq(ConstraintSystem& cs, Wire a, Wire b, unsigned k) {
  require_width(cs, k + 1, "leq");
  const Field& f = cs.field();
  const std::array<AffineTerm, 2> terms{AffineTerm{f.one(), b}, AffineTerm{f.neg(f.one()), a}};
  const Wire shifted = cs.affine(terms, pow2(f, k));
  return decompose_bits(cs, shifted, k + 1).bits[k];
}

void assert_leq(ConstraintSystem& cs, Wire a, Wire b, unsigned k) {
  cs.assert_equals_constant(leq(cs, a, b, k), cs.field().one());
}

Wire is_nonneg(ConstraintSystem& cs, Wire v, unsigned m) {
  require_width(cs, m + 1, "is_nonneg");
  const Wire shifted = cs.add_constant(v, pow2(cs.field(), m));
  return decompose_bits(cs, shifted, m + 1).bits[m];
}

Wire sqrt_floor(ConstraintSystem& cs, Wire sq, unsigned k, SqrtMode mode, std::optional<FieldElement> claimed) {
  require_width(cs, 2 * k + 1, "sqrt_floor");
  const Field& f = cs.field();
  const FieldElement honest{localcalc::isqrt(cs.value(sq).value)};
  const Wire d = cs.input(claimed.value_or(honest), Domain::ProverOnly);
  decompose_bits(cs, d, k);
  if (mode != SqrtMode::UpperOnly) {
    assert_leq(cs, cs.mul(d, d), sq, 2 * k + 1);
  }
  if (mode != SqrtMode::LowerOnly) {
    const Wire d1 = cs.add_constant(d, f.one());
    assert_leq(cs, cs.add_constant(sq, f.one()), cs.mul(d1, d1), 2 * k + 1);
  }
  return d;
}

std::vector<Wire> poseidon_permute(ConstraintSystem& cs, std::span<const Wire> state, const PoseidonParams& pp) {
  if (state.size() != pp.t) throw Error(ErrorCode::InvalidParams, "state width does not match poseidon t");
  std::vector<Wire> s(state.begin(), state.end());
  std::vector<AffineTerm> terms(pp.t);
  auto sbox = [&](Wire x) {
    // square-and-multiply over the bits of alpha, high to low
    Wire acc = x;
    for (int bit = static_cast<int>(bit_length(pp.alpha)) - 2; bit >= 0; --bit) {
      acc = cs.mul(acc, acc);
      if ((pp.alpha >> bit) & 1) acc = cs.mul(acc, x);
    }
    return acc;
  };
  for (std::size_t r = 0; r < pp.rounds(); ++r) {
    for (std::size_t i = 0; i < pp.t; ++i) s[i] = cs.add_constant(s[i], pp.round_constant(r, i));
    if (pp.is_full_round(r)) {
      for (std::size_t i = 0; i < pp.t; ++i) s[i] = sbox(s[i]);
    } else {
      s[0] = sbox(s[0]);
    }
    std::vector<Wire> next(pp.t);
    for (std::size_t i = 0; i < pp.t; ++i) {
      for (std::size_t j = 0; j < pp.t; ++j) terms[j] = AffineTerm{pp.mds[i][j], s[j]};
      next[i] = cs.affine(terms);
    }
    s = std::move(next);
  }
  return s;
}

Wire poseidon_hash(ConstraintSystem& cs, std::span<const Wire> msg, const PoseidonParams& pp) {
  if (msg.empty()) throw Error(ErrorCode::EmptyMessage, "cannot hash an empty message");
  const Field& f = cs.field();
  std::vector<Wire> state(pp.t);
  state[0] = cs.constant(f.from_signed(static_cast<i128>(msg.size())));
  const Wire zero = cs.constant(f.zero());
  for (std::size_t i = 1; i < pp.t; ++i) state[i] = zero;
  const std::size_t rate = pp.rate();
  for (std::size_t off = 0; off < msg.size(); off += rate) {
    for (std::size_t j = 0; j < rate && off + j < msg.size(); ++j) {
      state[1 + j] = cs.add(state[1 + j], msg[off + j]);
    }
    state = poseidon_permute(cs, state, pp);
  }
  return state[0];
}

Wire check_inside(ConstraintSystem& cs, std::span<const Wire> u, std::span<const Wire> v, std::span<const Wire> s,
                  Wire x, Wire y, unsigned coord_bits) {
  if (u.size() != v.size() || u.size() != s.size()) {
    throw Error(ErrorCode::InvalidParams, "circle centre and radius lists differ in length");
  }
  if (u.empty()) return cs.constant(cs.field().zero());
  Wire any;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const Wire dx = cs.sub(x, u[i]);
    const Wire dy = cs.sub(y, v[i]);
    const Wire dist = cs.add(cs.mul(dx, dx), cs.mul(dy, dy));
    const Wire hit = leq(cs, dist, s[i], 2 * coord_bits + 1);
    any = i == 0 ? hit : boolean_or(cs, any, hit);
  }
  return any;
}

Wire area_dbl(ConstraintSystem& cs, Wire a1, Wire b1, Wire a2, Wire b2, Wire a3, Wire b3) {
  // a1(b2 - b3) + a2(b3 - b1) + a3(b1 - b2), the cofactor form of the determinant
  const Wire t1 = cs.mul(a1, cs.sub(b2, b3));
  const Wire t2 = cs.mul(a2, cs.sub(b3, b1));
  const Wire t3 = cs.mul(a3, cs.sub(b1, b2));
  const FieldElement one = cs.field().one();
  const std::array<AffineTerm, 3> terms{AffineTerm{one, t1}, AffineTerm{one, t2}, AffineTerm{one, t3}};
  return cs.affine(terms);
}

Wire check_inside_triangle(ConstraintSystem& cs, const std::array<Wire, 3>& a, const std::array<Wire, 3>& b, Wire x,
                           Wire y, const localcalc::BaryCoords& bc, unsigned coord_bits) {
  const Field& f = cs.field();
  const FieldElement one = f.one();
  const FieldElement minus_one = f.neg(one);
  const Wire area = area_dbl(cs, a[0], b[0], a[1], b[1], a[2], b[2]);
  const Wire s = cs.input(f.from_signed(bc.s), Domain::ProverOnly);
  const Wire t = cs.input(f.from_signed(bc.t), Domain::ProverOnly);
  const std::array<AffineTerm, 3> u_terms{AffineTerm{one, area}, AffineTerm{minus_one, s}, AffineTerm{minus_one, t}};
  const Wire u = cs.affine(u_terms);

  auto reconstruct = [&](const std::array<Wire, 3>& c) {
    const std::array<AffineTerm, 3> terms{AffineTerm{one, cs.mul(u, c[0])}, AffineTerm{one, cs.mul(s, c[1])},
                                          AffineTerm{one, cs.mul(t, c[2])}};
    return cs.affine(terms);
  };
  cs.assert_eq(reconstruct(a), cs.mul(x, area));
  cs.assert_eq(reconstruct(b), cs.mul(y, area));

  const unsigned m = barycentric_bits(coord_bits);
  const Wire s_ok = is_nonneg(cs, s, m);
  const Wire t_ok = is_nonneg(cs, t, m);
  const Wire u_ok = is_nonneg(cs, u, m);
  return boolean_and(cs, boolean_and(cs, s_ok, t_ok), u_ok);
}

std::vector<Wire> lookup_with_selector(ConstraintSystem& cs, std::span<const FieldElement> selector,
                                       const std::vector<std::vector<Wire>>& table) {
  if (selector.size() != table.size()) throw Error(ErrorCode::InvalidParams, "selector length differs from table rows");
  if (table.empty()) throw Error(ErrorCode::InvalidParams, "lookup table is empty");
  const std::size_t width = table.front().size();
  const Field& f = cs.field();
  std::vector<Wire> sel;
  sel.reserve(selector.size());
  std::vector<AffineTerm> sum_terms;
  for (const FieldElement& bit : selector) {
    const Wire w = cs.input(bit, Domain::ProverOnly);
    assert_boolean(cs, w);
    sel.push_back(w);
    sum_terms.push_back(AffineTerm{f.one(), w});
  }
  cs.assert_equals_constant(cs.affine(sum_terms), f.one());

  std::vector<Wire> out(width);
  std::vector<AffineTerm> col_terms(table.size());
  for (std::size_t k = 0; k < width; ++k) {
    for (std::size_t i = 0; i < table.size(); ++i) {
      if (table[i].size() != width) throw Error(ErrorCode::InvalidParams, "ragged lookup table");
      col_terms[i] = AffineTerm{f.one(), cs.mul(sel[i], table[i][k])};
    }
    out[k] = cs.affine(col_terms);
  }
  return out;
}

std::vector<Wire> lookup(ConstraintSystem& cs, std::size_t index, const std::vector<std::vector<Wire>>& table) {
  std::vector<FieldElement> selector(table.size());
  for (std::size_t i = 0; i < table.size(); ++i) selector[i] = FieldElement{i + 1 == index ? 1u : 0u};
  return lookup_with_selector(cs, selector, table);
}

}  // namespace zkpol::gadgets
