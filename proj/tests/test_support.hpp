#pragma once

#include <gmpxx.h>

#include <random>
#include <string>

#include "zkpol/field.hpp"

namespace zkpol::testing {

inline mpz_class to_mpz(u128 v) { return mpz_class(u128_to_string(v)); }

inline u128 from_mpz(const mpz_class& v) { return u128_from_string(v.get_str()); }

inline u128 random_u128(std::mt19937_64& rng) { return (u128(rng()) << 64) | rng(); }

inline FieldElement random_element(const Field& f, std::mt19937_64& rng) { return f.element(random_u128(rng)); }

}  // namespace zkpol::testing
