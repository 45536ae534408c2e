#include "twist/characters.hpp"

#include <stdexcept>
#include <string>

namespace twist {

CharacterTable::CharacterTable(i64 p, int h) : p_(p), h_(h) {
  if (h < 1)
    throw std::invalid_argument("build_character_table: h must be >= 1");
  if (p < 3 || p % 2 == 0 || !is_prime(p))
    throw std::invalid_argument("build_character_table: p must be an odd prime");
  q_ = ipow(p, h);
  if (q_ > 10'000'000)
    throw std::invalid_argument("build_character_table: p^h exceeds 10^7");
  phi_ = q_ / p * (p - 1);
  g_ = 0;
  for (i64 c = 2; c < q_; ++c) {
    if (c % p && multiplicative_order(c, q_) == phi_) {
      g_ = c;
      break;
    }
  }
  if (!g_)
    throw std::logic_error("build_character_table: no primitive root found");
  dlog_.assign(static_cast<std::size_t>(q_), -1);
  i64 x = 1;
  for (i64 k = 0; k < phi_; ++k) {
    dlog_[static_cast<std::size_t>(x)] = static_cast<std::int32_t>(k);
    x = x * g_ % q_;
  }
}

std::shared_ptr<const CharacterTable> build_character_table(i64 p, int h) {
  return std::make_shared<const CharacterTable>(p, h);
}

DirichletCharacter::DirichletCharacter(
    std::shared_ptr<const CharacterTable> table, i64 j)
    : table_(std::move(table)), j_(0) {
  if (!table_)
    throw std::invalid_argument("DirichletCharacter: null table");
  j_ = mod(j, table_->phi());
}

i64 DirichletCharacter::order() const {
  return table_->phi() / gcd(j_, table_->phi());
}

i64 DirichletCharacter::conductor() const {
  if (j_ == 0)
    return 1;
  i64 o = order();
  int e = 0;
  while (o % table_->p() == 0) {
    o /= table_->p();
    ++e;
  }
  return ipow(table_->p(), e + 1);
}

bool DirichletCharacter::is_wild() const {
  i64 p = table_->p();
  if (table_->h() < 2 || j_ % (p - 1))
    return false;
  return gcd(j_ / (p - 1), p) == 1;
}

bool DirichletCharacter::is_even() const { return j_ % 2 == 0; }

DirichletCharacter DirichletCharacter::conj() const {
  return DirichletCharacter(table_, -j_);
}

DirichletCharacter DirichletCharacter::pow(i64 a) const {
  return DirichletCharacter(table_, mulmod(j_, a, table_->phi()));
}

i64 DirichletCharacter::exponent(i64 n) const {
  i64 d = table_->dlog(n);
  if (d < 0)
    return -1;
  return mulmod(j_, d, table_->phi());
}

CyclotomicElement DirichletCharacter::evaluate_exact(i64 n) const {
  i64 k = exponent(n);
  if (k < 0)
    return CyclotomicElement(table_->phi());
  return CyclotomicElement::root(table_->phi(), k);
}

i64 DirichletCharacter::wild_exponent(i64 n) const {
  if (!is_wild())
    throw std::domain_error("wild_exponent: character is not wild");
  i64 d = table_->dlog(n);
  if (d < 0)
    return -1;
  i64 M = table_->q() / table_->p();
  return mulmod(j_ / (table_->p() - 1), d, M);
}

std::vector<DirichletCharacter>
wild_characters(const std::shared_ptr<const CharacterTable> &table) {
  if (table->h() < 2)
    throw std::domain_error("wild_characters: h must be >= 2");
  std::vector<DirichletCharacter> out;
  i64 p = table->p();
  for (i64 j = 0; j < table->phi(); j += p - 1) {
    DirichletCharacter chi(table, j);
    if (chi.is_wild())
      out.push_back(chi);
  }
  return out;
}

std::vector<DirichletCharacter> galois_orbit(const DirichletCharacter &chi) {
  if (!chi.is_wild())
    throw std::domain_error("galois_orbit: character is not wild");
  const auto &t = chi.table();
  i64 M = t.q() / t.p();
  std::vector<DirichletCharacter> out;
  for (i64 a = 1; a < M; ++a)
    if (a % t.p())
      out.push_back(chi.pow(a));
  return out;
}

std::pair<i64, i64> teichmuller_decompose(i64 n, i64 p, int h) {
  if (mod(n, p) == 0)
    throw std::domain_error("teichmuller_decompose: p divides n");
  i64 q = ipow(p, h);
  i64 tm = powmod(n, static_cast<u64>(q / p), q);
  i64 pu = mulmod(n, invmod(tm, q), q);
  return {tm, pu};
}

GaloisAverageContext GaloisAverageContext::rational(i64 p) {
  GaloisAverageContext c;
  c.p = p;
  c.s = 0;
  c.tame_order = 1;
  c.h0 = 1;
  c.degree = 1;
  return c;
}

GaloisAverageContext GaloisAverageContext::cyclotomic(i64 p, int s,
                                                      i64 tame_order) {
  if (s == 0)
    return rational(p);
  if (s < 0 || tame_order < 1 || (p - 1) % tame_order)
    throw std::invalid_argument("GaloisAverageContext: bad field data");
  GaloisAverageContext c;
  c.p = p;
  c.s = s;
  c.tame_order = tame_order;
  c.h0 = s;
  c.degree = euler_phi(ipow(p, s)) / tame_order;
  return c;
}

std::vector<i64> GaloisAverageContext::fixing_group(int k) const {
  if (k < s)
    throw std::invalid_argument("fixing_group: level below field level");
  i64 pk = ipow(p, k);
  std::vector<i64> out;
  i64 ps = ipow(p, s);
  for (i64 a = 1; a < std::max<i64>(pk, 2); ++a) {
    if (a % p == 0)
      continue;
    if (s > 0) {
      i64 r = a % ps;
      // r must be a Teichmuller root of order dividing tame_order.
      if (powmod(r, static_cast<u64>(tame_order), ps) != 1 % ps)
        continue;
      if (powmod(r, static_cast<u64>(p - 1), ps) != 1 % ps)
        continue;
    }
    out.push_back(a % pk);
  }
  return out;
}

std::vector<i64> GaloisAverageContext::tau_exponents() const {
  return fixing_group(h0);
}

namespace {

void check_average_args(const DirichletCharacter &chi, i64 n,
                        const GaloisAverageContext &ctx) {
  if (!chi.is_wild())
    throw std::domain_error("galois_average: character is not wild");
  if (ctx.p != chi.table().p())
    throw std::invalid_argument("galois_average: prime mismatch");
  if (chi.table().h() <= ctx.h0)
    throw std::domain_error("galois_average: requires h > h0");
  if (mod(n, ctx.p) == 0)
    throw std::domain_error("galois_average: p divides n");
}

} // namespace

CyclotomicRational galois_average(const DirichletCharacter &chi, i64 n,
                                  const GaloisAverageContext &ctx) {
  check_average_args(chi, n, ctx);
  const auto &t = chi.table();
  i64 M = t.q() / t.p();
  auto [tm, pu] = teichmuller_decompose(n, t.p(), t.h());
  i64 modulus = ipow(t.p(), t.h() - ctx.h0);
  if (pu % modulus != 1 % modulus)
    return CyclotomicRational(CyclotomicElement(M), 1);
  i64 k = chi.wild_exponent(n);
  auto taus = ctx.tau_exponents();
  CyclotomicElement sum(M);
  for (i64 a : taus)
    sum += CyclotomicElement::root(M, mulmod(k, a, M));
  return CyclotomicRational(sum, static_cast<i64>(taus.size()));
}

CyclotomicRational galois_average_brute(const DirichletCharacter &chi, i64 n,
                                        const GaloisAverageContext &ctx) {
  check_average_args(chi, n, ctx);
  const auto &t = chi.table();
  i64 M = t.q() / t.p();
  i64 k = chi.wild_exponent(n);
  auto group = ctx.fixing_group(t.h() - 1);
  CyclotomicElement sum(M);
  for (i64 a : group)
    sum += CyclotomicElement::root(M, mulmod(k, a, M));
  return CyclotomicRational(sum, static_cast<i64>(group.size()));
}

CyclotomicElement subfield_trace(const CyclotomicElement &x, i64 p, int r) {
  if (r < 1)
    throw std::domain_error(
        "subfield_trace: target field must contain mu_p (r >= 1)");
  i64 M = x.order();
  i64 pr = ipow(p, r);
  i64 t = M;
  while (t % p == 0)
    t /= p;
  if (t != 1 || M % pr)
    throw std::invalid_argument("subfield_trace: order must be p^k with k >= r");
  CyclotomicElement sum(M);
  for (i64 a = 1; a < M; a += pr)
    sum += x.galois(a);
  return sum;
}

} // namespace twist
