#include "doctest.h"
#include "test_support.hpp"
#include "zkpol/field.hpp"

using namespace zkpol;
using zkpol::testing::from_mpz;
using zkpol::testing::random_element;
using zkpol::testing::to_mpz;

namespace {
const u128 kP = (u128(1) << 127) - 1;
}

TEST_CASE("default field is the Mersenne prime 2^127 - 1") {
  Field f;
  CHECK(f.modulus() == kP);
  CHECK(f.modulus_bits() == 127);
  CHECK(f.coord_bits() == 24);
}

TEST_CASE("f_arith examples") {
  Field f;
  CHECK(f.arith(ArithKind::Mul, f.element(2), f.element(3)) == f.element(6));
  CHECK(f.mul(FieldElement{kP - 1}, FieldElement{kP - 1}) == f.one());
  CHECK(f.add(FieldElement{kP - 1}, f.element(1)) == f.zero());
  CHECK(f.sub(f.element(0), f.element(1)) == FieldElement{kP - 1});
}

TEST_CASE("random 126-bit products match an arbitrary-precision oracle") {
  Field f;
  std::mt19937_64 rng(0x5eed);
  const mpz_class p = to_mpz(kP);
  for (int i = 0; i < 2000; ++i) {
    const u128 a = zkpol::testing::random_u128(rng) >> 2;
    const u128 b = zkpol::testing::random_u128(rng) >> 2;
    const mpz_class expect = (to_mpz(a) * to_mpz(b)) % p;
    CHECK(f.mul(f.element(a), f.element(b)).value == from_mpz(expect));
    CHECK(f.add(f.element(a), f.element(b)).value == from_mpz((to_mpz(a) + to_mpz(b)) % p));
  }
}

TEST_CASE("generic and small moduli agree with the oracle") {
  // 2^89 - 1 is a Mersenne prime but we also want a non-Mersenne 100-bit prime.
  mpz_class q;
  mpz_nextprime(q.get_mpz_t(), mpz_class("1000000000000000000000000000000").get_mpz_t());
  Field generic(FieldParams{from_mpz(q), 24});
  Field small(FieldParams{u128(0xffffffffffffffc5ull), 16});  // 2^64 - 59
  std::mt19937_64 rng(7);
  for (int i = 0; i < 500; ++i) {
    const FieldElement a = random_element(generic, rng), b = random_element(generic, rng);
    CHECK(generic.mul(a, b).value == from_mpz((to_mpz(a.value) * to_mpz(b.value)) % q));
    const FieldElement c = random_element(small, rng), d = random_element(small, rng);
    CHECK(small.mul(c, d).value == from_mpz((to_mpz(c.value) * to_mpz(d.value)) % to_mpz(small.modulus())));
  }
}

TEST_CASE("f_inv") {
  Field f;
  CHECK(f.inv(f.one()) == f.one());
  CHECK(f.inv(f.element(2)).value == (kP + 1) / 2);
  CHECK_THROWS_AS(f.inv(f.zero()), Error);
  try {
    f.inv(f.zero());
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InversionOfZero);
  }
  std::mt19937_64 rng(11);
  const mpz_class p = to_mpz(kP);
  for (int i = 0; i < 200; ++i) {
    FieldElement a = random_element(f, rng);
    if (a.value == 0) continue;
    mpz_class expect;
    mpz_invert(expect.get_mpz_t(), to_mpz(a.value).get_mpz_t(), p.get_mpz_t());
    CHECK(f.inv(a).value == from_mpz(expect));
    CHECK(f.mul(a, f.inv(a)) == f.one());
  }
}

TEST_CASE("from_signed embedding") {
  Field f;
  CHECK(f.from_signed(0) == f.zero());
  CHECK(f.from_signed(-5).value == kP - 5);
  CHECK(f.from_signed(7).value == 7);
  const i128 half = static_cast<i128>(kP / 2);
  CHECK(f.from_signed(half).value == kP / 2);
  CHECK(f.from_signed(-half).value == kP - kP / 2);
  try {
    f.from_signed(half + 1);
    FAIL("expected OutOfRange");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OutOfRange);
  }
  CHECK_THROWS_AS(f.from_signed(-half - 1), Error);
}

TEST_CASE("field axioms and signed round trip on random inputs") {
  Field f;
  std::mt19937_64 rng(99);
  for (int i = 0; i < 1000; ++i) {
    const FieldElement a = random_element(f, rng), b = random_element(f, rng), c = random_element(f, rng);
    CHECK(f.add(a, b) == f.add(b, a));
    CHECK(f.mul(a, b) == f.mul(b, a));
    CHECK(f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c)));
    CHECK(f.add(f.add(a, b), c) == f.add(a, f.add(b, c)));
    CHECK(f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c)));
    CHECK(f.sub(f.add(a, b), b) == a);

    const i128 n = static_cast<i128>(zkpol::testing::random_u128(rng) >> 2) * ((rng() & 1) ? 1 : -1);
    CHECK(f.to_signed(f.from_signed(n)) == n);
    if (n > 0) CHECK(f.from_signed(-n).value == kP - f.from_signed(n).value);
  }
}

TEST_CASE("field parameter validation") {
  CHECK_THROWS_AS(Field(FieldParams{(u128(1) << 127) - 3, 24}), Error);  // composite
  CHECK_THROWS_AS(Field(FieldParams{(u128(1) << 61) - 1, 24}), Error);   // prime, but no headroom for 24-bit coords
  CHECK_NOTHROW(Field(FieldParams{(u128(1) << 61) - 1, 16}));
  CHECK(is_probable_prime((u128(1) << 127) - 1));
  CHECK(is_probable_prime((u128(1) << 89) - 1));
  CHECK_FALSE(is_probable_prime((u128(1) << 67) - 1));  // 193707721 * 761838257287
}

TEST_CASE("decimal conversions") {
  CHECK(u128_to_string(kP) == "170141183460469231731687303715884105727");
  CHECK(u128_from_string("170141183460469231731687303715884105727") == kP);
  CHECK(u128_from_string("0x7fffffffffffffffffffffffffffffff") == kP);
  CHECK(i128_from_string("-42") == -42);
  CHECK(i128_to_string(-42) == "-42");
  CHECK_THROWS_AS(u128_from_string("12a"), Error);
  CHECK_THROWS_AS(u128_from_string("999999999999999999999999999999999999999999"), Error);
}
