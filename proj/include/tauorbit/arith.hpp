#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace tauorbit {

using Int = mpz_class;

struct ZeroInput : std::invalid_argument {
  ZeroInput() : std::invalid_argument("input must be nonzero") {}
};
struct UndefinedValue : std::invalid_argument {
  explicit UndefinedValue(const std::string& what) : std::invalid_argument(what) {}
};
struct EvenModulus : std::invalid_argument {
  EvenModulus() : std::invalid_argument("modulus of a Legendre symbol must be an odd prime") {}
};
struct NotInvertible : std::invalid_argument {
  NotInvertible() : std::invalid_argument("element is not invertible modulo m") {}
};
struct IncompleteFactorization : std::runtime_error {
  explicit IncompleteFactorization(const std::string& what) : std::runtime_error(what) {}
};

/// Effort limit for factoring: a cap on iterations of the rho splitting
/// loop, not wall-clock, so runs are reproducible.
struct Budget {
  std::uint64_t rho_iterations = 1'000'000;
};

/// Exact signed factorization with an honest completeness flag.
/// sign * cofactor * prod(p_i^e_i) always reassembles the input.
struct Factorization {
  int sign = 1;
  std::vector<std::pair<Int, unsigned>> factors;  // primes strictly increasing
  Int cofactor = 1;                               // 1 iff complete
  bool complete = true;
  bool has_probable_primes = false;  // a listed prime >= 2^64 passed only the strong test

  Int reassemble() const;
  std::optional<unsigned> exponent_of(const Int& p) const;
};

/// Deterministic Miller-Rabin below 2^64; Baillie-PSW above (strong base-2
/// plus strong Lucas-Selfridge, no pseudoprime known).
bool is_prime(const Int& n);

std::vector<std::uint64_t> primes_up_to(std::uint64_t n);

/// Trial division up to 10^4, then Brent-rho splitting until the budget
/// runs out. Throws ZeroInput on n = 0.
Factorization factorize(const Int& n, const Budget& budget = {});

struct LargestPrime {
  Int p;
  bool exact;  // false: p is a certified lower bound (largest prime found)
};

/// Throws UndefinedValue for |n| <= 1. Returns nullopt when no prime factor
/// was found at all within budget.
std::optional<LargestPrime> largest_prime_factor(const Int& n, const Budget& budget = {});

/// Largest e with p^e | n.  Throws ZeroInput on n = 0.
unsigned long p_adic_valuation(const Int& n, const Int& p);

/// Product of the distinct primes dividing n.  Throws
/// IncompleteFactorization when the budget is not enough to factor n.
Int radical(const Int& n, const Budget& budget = {});

/// Legendre symbol (a/p) by the binary Jacobi algorithm.  Throws
/// EvenModulus unless p is odd (and at least 3).
int legendre(const Int& a, const Int& p);

/// Square-and-multiply; negative exponents go through the inverse.
Int mod_pow(const Int& base, const Int& exponent, const Int& m);

/// Extended-gcd inverse; throws NotInvertible when gcd(a, m) != 1.
Int mod_inverse(const Int& a, const Int& m);

}  // namespace tauorbit
