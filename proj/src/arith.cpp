#include "tauorbit/arith.hpp"

#include <algorithm>
#include <array>
#include <cstddef>

namespace tauorbit {

Int Factorization::reassemble() const {
  Int r = cofactor;
  for (const auto& [p, e] : factors) {
    Int pe;
    mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), e);
    r *= pe;
  }
  return sign < 0 ? Int(-r) : r;
}

std::optional<unsigned> Factorization::exponent_of(const Int& p) const {
  for (const auto& [q, e] : factors)
    if (q == p) return e;
  return std::nullopt;
}

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mulmod_u64(u64 a, u64 b, u64 m) { return static_cast<u64>(u128(a) * b % m); }

u64 powmod_u64(u64 b, u64 e, u64 m) {
  u64 r = 1;
  b %= m;
  while (e) {
    if (e & 1) r = mulmod_u64(r, b, m);
    b = mulmod_u64(b, b, m);
    e >>= 1;
  }
  return r;
}

// Strong probable prime test to base a; n odd > 2.
bool miller_rabin_u64(u64 n, u64 a) {
  if (a % n == 0) return true;
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  u64 x = powmod_u64(a % n, d, n);
  if (x == 1 || x == n - 1) return true;
  for (int i = 1; i < s; ++i) {
    x = mulmod_u64(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

// The first twelve primes witness deterministically for all n < 3.3*10^24,
// in particular for the whole 64-bit range.
bool is_prime_u64(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull})
    if (!miller_rabin_u64(n, a)) return false;
  return true;
}

bool miller_rabin_mpz(const Int& n, unsigned long a) {
  Int d = n - 1;
  unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
  mpz_tdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), s);
  Int x;
  Int base(a);
  mpz_powm(x.get_mpz_t(), base.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
  Int nm1 = n - 1;
  if (x == 1 || x == nm1) return true;
  for (unsigned long i = 1; i < s; ++i) {
    x = x * x % n;
    if (x == nm1) return true;
  }
  return false;
}

// Strong Lucas probable prime test with Selfridge parameters (method A):
// first D in 5, -7, 9, -11, ... with (D/n) = -1; P = 1, Q = (1-D)/4.
bool strong_lucas_mpz(const Int& n) {
  if (mpz_perfect_square_p(n.get_mpz_t())) return false;
  long d_abs = 5;
  int sign = 1;
  Int D;
  while (true) {
    D = sign * d_abs;
    int j = mpz_jacobi(D.get_mpz_t(), n.get_mpz_t());
    if (j == -1) break;
    if (j == 0 && n != d_abs) return false;  // shares a factor with D
    d_abs += 2;
    sign = -sign;
  }
  Int Q = (1 - D) / 4;

  Int delta = n + 1;
  unsigned long s = mpz_scan1(delta.get_mpz_t(), 0);
  Int d;
  mpz_tdiv_q_2exp(d.get_mpz_t(), delta.get_mpz_t(), s);

  // Compute U_d, V_d, Q^d mod n by the binary chain (P = 1).
  Int U = 0, V = 2, Qk = 1;
  size_t bits = mpz_sizeinbase(d.get_mpz_t(), 2);
  Int inv2 = (n + 1) / 2;  // inverse of 2 mod odd n
  for (size_t i = bits; i-- > 0;) {
    // double: (U, V)_k -> (U, V)_{2k}
    U = U * V % n;
    V = (V * V - 2 * Qk) % n;
    Qk = Qk * Qk % n;
    if (mpz_tstbit(d.get_mpz_t(), i)) {
      // add one: U' = (U + V)/2, V' = (D*U + V)/2
      Int U2 = (U + V) * inv2 % n;
      Int V2 = (D * U + V) * inv2 % n;
      U = U2;
      V = V2;
      Qk = Qk * Q % n;
    }
  }
  auto zero_mod = [&](const Int& x) { return mpz_divisible_p(x.get_mpz_t(), n.get_mpz_t()) != 0; };
  if (zero_mod(U) || zero_mod(V)) return true;
  for (unsigned long r = 1; r < s; ++r) {
    V = (V * V - 2 * Qk) % n;
    Qk = Qk * Qk % n;
    if (zero_mod(V)) return true;
  }
  return false;
}

constexpr unsigned long kTrialDivisionBound = 10'000;

const std::vector<std::uint64_t>& trial_primes() {
  static const std::vector<std::uint64_t> primes = primes_up_to(kTrialDivisionBound);
  return primes;
}

// Brent's cycle variant of Pollard rho; returns a nontrivial factor of n or
// 0 when the iteration allowance is used up.  n must be odd, composite and
// coprime to small primes.  Deterministic: x0 = 2 and c = 1, 2, 3, ...
Int brent_rho(const Int& n, std::uint64_t& iterations_left) {
  const unsigned long kBatch = 128;
  Int x, y, ys, q, g, diff;
  for (unsigned long c = 1;; ++c) {
    y = 2;
    q = 1;
    g = 1;
    bool cycle_closed = false;
    unsigned long r = 1;
    while (g == 1 && !cycle_closed) {
      x = y;
      for (unsigned long i = 0; i < r; ++i) {
        if (iterations_left == 0) return 0;
        --iterations_left;
        y = (y * y + c) % n;
      }
      unsigned long k = 0;
      while (k < r && g == 1 && !cycle_closed) {
        ys = y;
        unsigned long lim = std::min(kBatch, r - k);
        for (unsigned long i = 0; i < lim; ++i) {
          if (iterations_left == 0) return 0;
          --iterations_left;
          y = (y * y + c) % n;
          diff = x - y;
          if (diff == 0) {
            cycle_closed = true;  // tortoise caught: restart with new c
            break;
          }
          q = q * diff % n;
        }
        mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        k += lim;
      }
      r *= 2;
    }
    if (g == n) {
      // a whole batch collapsed; replay from ys one step at a time
      g = 1;
      while (g == 1) {
        if (iterations_left == 0) return 0;
        --iterations_left;
        ys = (ys * ys + c) % n;
        diff = x - ys;
        if (diff == 0) break;
        mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
      }
    }
    if (g != 1 && g != n) return g;
    if (iterations_left == 0) return 0;
  }
}

}  // namespace

bool is_prime(const Int& n) {
  if (sgn(n) < 0) return false;
  if (mpz_fits_ulong_p(n.get_mpz_t())) return is_prime_u64(mpz_get_ui(n.get_mpz_t()));
  if (mpz_sizeinbase(n.get_mpz_t(), 2) <= 64) {
    // ulong may be 32-bit in principle; go through export
    u64 v = 0;
    mpz_export(&v, nullptr, -1, sizeof(v), 0, 0, n.get_mpz_t());
    return is_prime_u64(v);
  }
  if (mpz_even_p(n.get_mpz_t())) return false;
  if (!miller_rabin_mpz(n, 2)) return false;
  return strong_lucas_mpz(n);
}

std::vector<std::uint64_t> primes_up_to(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  if (n < 2) return out;
  std::vector<bool> composite(n + 1, false);
  for (std::uint64_t i = 2; i <= n; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (std::uint64_t j = i * i; j <= n; j += i) composite[j] = true;
  }
  return out;
}

Factorization factorize(const Int& n, const Budget& budget) {
  if (n == 0) throw ZeroInput();
  Factorization f;
  f.sign = sgn(n) < 0 ? -1 : 1;
  Int m = abs(n);
  if (m == 1) return f;

  for (std::uint64_t p : trial_primes()) {
    if (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
      unsigned e = 0;
      do {
        mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
        ++e;
      } while (mpz_divisible_ui_p(m.get_mpz_t(), p));
      f.factors.emplace_back(Int(p), e);
    }
    if (m == 1) break;
    if (mpz_cmp_ui(m.get_mpz_t(), p * p) < 0) break;  // remaining cofactor is prime
  }

  std::uint64_t iterations_left = budget.rho_iterations;
  std::vector<Int> pending;
  if (m > 1) pending.push_back(m);
  std::vector<std::pair<Int, unsigned>> found;
  Int failed_product = 1;
  while (!pending.empty()) {
    Int v = pending.back();
    pending.pop_back();
    if (v == 1) continue;
    if (is_prime(v)) {
      found.emplace_back(v, 1);
      if (mpz_sizeinbase(v.get_mpz_t(), 2) > 64) f.has_probable_primes = true;
      continue;
    }
    Int d = brent_rho(v, iterations_left);
    if (d == 0) {
      failed_product *= v;  // budget exhausted; v stays composite
      continue;
    }
    pending.push_back(d);
    pending.push_back(v / d);
  }

  // merge repeated primes from the splitting stage
  std::sort(found.begin(), found.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (auto& [p, e] : found) {
    if (!f.factors.empty() && f.factors.back().first == p)
      f.factors.back().second += e;
    else
      f.factors.emplace_back(p, e);
  }
  std::sort(f.factors.begin(), f.factors.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  f.cofactor = failed_product;
  f.complete = (f.cofactor == 1);
  return f;
}

std::optional<LargestPrime> largest_prime_factor(const Int& n, const Budget& budget) {
  Int m = abs(n);
  if (m <= 1) throw UndefinedValue("largest prime factor needs |n| > 1");
  Factorization f = factorize(m, budget);
  if (f.factors.empty()) return std::nullopt;
  return LargestPrime{f.factors.back().first, f.complete};
}

unsigned long p_adic_valuation(const Int& n, const Int& p) {
  if (n == 0) throw ZeroInput();
  Int q;
  return mpz_remove(q.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t());
}

Int radical(const Int& n, const Budget& budget) {
  if (n == 0) throw ZeroInput();
  Factorization f = factorize(n, budget);
  if (!f.complete) throw IncompleteFactorization("radical: budget exhausted before full factorization");
  Int r = 1;
  for (const auto& [p, e] : f.factors) r *= p;
  return r;
}

int legendre(const Int& a, const Int& p) {
  if (mpz_even_p(p.get_mpz_t()) || p < 3) throw EvenModulus();
  // binary Jacobi; p odd prime makes it the Legendre symbol
  Int u = a % p;
  if (u < 0) u += p;
  Int v = p;
  if (u == 0) return 0;
  int result = 1;
  while (u != 0) {
    unsigned long twos = mpz_scan1(u.get_mpz_t(), 0);
    mpz_tdiv_q_2exp(u.get_mpz_t(), u.get_mpz_t(), twos);
    if (twos & 1) {
      unsigned long vm8 = mpz_fdiv_ui(v.get_mpz_t(), 8);
      if (vm8 == 3 || vm8 == 5) result = -result;
    }
    // reciprocity: u, v both odd now
    if (mpz_fdiv_ui(u.get_mpz_t(), 4) == 3 && mpz_fdiv_ui(v.get_mpz_t(), 4) == 3) result = -result;
    std::swap(u, v);
    u %= v;
  }
  return v == 1 ? result : 0;
}

Int mod_pow(const Int& base, const Int& exponent, const Int& m) {
  if (m < 2) throw UndefinedValue("modulus must be at least 2");
  Int r;
  if (exponent < 0) {
    Int inv = mod_inverse(base, m);
    Int e = -exponent;
    mpz_powm(r.get_mpz_t(), inv.get_mpz_t(), e.get_mpz_t(), m.get_mpz_t());
  } else {
    mpz_powm(r.get_mpz_t(), base.get_mpz_t(), exponent.get_mpz_t(), m.get_mpz_t());
  }
  return r;
}

Int mod_inverse(const Int& a, const Int& m) {
  if (m < 2) throw UndefinedValue("modulus must be at least 2");
  Int r;
  if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0) throw NotInvertible();
  return r;
}

}  // namespace tauorbit
