#include "finsler/jet/space.hpp"

#include <algorithm>
#include <mutex>

#include "finsler/errors.hpp"

namespace finsler {

namespace {

// Enumerates all exponent vectors of length n with total degree <= cap, ordered by total
// degree then lexicographically. Degree-major order keeps the constant term at rank 0.
void enumerate_monomials(int n, int cap, std::vector<std::vector<uint8_t>>& out) {
  std::vector<uint8_t> cur(static_cast<size_t>(n), 0);
  for (int deg = 0; deg <= cap; ++deg) {
    // generate all vectors with |cur| == deg recursively
    struct Gen {
      int n, deg;
      std::vector<uint8_t>& cur;
      std::vector<std::vector<uint8_t>>& out;
      void go(int pos, int remaining) {
        if (pos == n - 1) {
          cur[static_cast<size_t>(pos)] = static_cast<uint8_t>(remaining);
          out.push_back(cur);
          return;
        }
        for (int e = remaining; e >= 0; --e) {
          cur[static_cast<size_t>(pos)] = static_cast<uint8_t>(e);
          go(pos + 1, remaining - e);
        }
      }
    } gen{n, deg, cur, out};
    if (n == 0) continue;
    gen.go(0, deg);
  }
}

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

} // namespace

JetSpace::JetSpace(const DegreeCaps& caps) : caps_(caps) {
  const int n = caps.dim;
  if (n < 1 || n > 8) fail(errc::config, "jet space dimension must be in [1,8]");
  if (caps.x_cap < 0 || caps.y_cap < 0 || caps.x_cap > 12 || caps.y_cap > 12)
    fail(errc::config, "degree caps must be in [0,12]");

  std::vector<std::vector<uint8_t>> xm, ym;
  enumerate_monomials(n, caps.x_cap, xm);
  enumerate_monomials(n, caps.y_cap, ym);

  n_monomials_ = xm.size() * ym.size();
  if (n_monomials_ > 2'000'000) fail(errc::config, "truncation set too large");
  mono_.resize(n_monomials_ * 2 * static_cast<size_t>(n));
  deg_x_.resize(n_monomials_);
  deg_y_.resize(n_monomials_);
  fact_.resize(n_monomials_);
  rank_.reserve(n_monomials_ * 2);

  // Order monomials by (total degree, x-degree, enumeration order) so rank 0 is the constant.
  struct Entry {
    int dx, dy;
    size_t xi, yi;
  };
  std::vector<Entry> entries;
  entries.reserve(n_monomials_);
  auto degree_of = [](const std::vector<uint8_t>& v) {
    int d = 0;
    for (uint8_t e : v) d += e;
    return d;
  };
  for (size_t xi = 0; xi < xm.size(); ++xi)
    for (size_t yi = 0; yi < ym.size(); ++yi)
      entries.push_back({degree_of(xm[xi]), degree_of(ym[yi]), xi, yi});
  std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.dx + a.dy != b.dx + b.dy) return a.dx + a.dy < b.dx + b.dy;
    if (a.dx != b.dx) return a.dx < b.dx;
    if (a.xi != b.xi) return a.xi < b.xi;
    return a.yi < b.yi;
  });

  for (size_t r = 0; r < n_monomials_; ++r) {
    const Entry& e = entries[r];
    uint8_t* dst = mono_.data() + r * 2 * static_cast<size_t>(n);
    double f = 1.0;
    for (int i = 0; i < n; ++i) {
      dst[i] = xm[e.xi][static_cast<size_t>(i)];
      f *= factorial(dst[i]);
    }
    for (int i = 0; i < n; ++i) {
      dst[n + i] = ym[e.yi][static_cast<size_t>(i)];
      f *= factorial(dst[n + i]);
    }
    deg_x_[r] = e.dx;
    deg_y_[r] = e.dy;
    fact_[r] = f;
    rank_.emplace(pack_key(dst), static_cast<uint32_t>(r));
  }

  // Product plan: for each output monomial, every split into two in-set monomials.
  std::vector<std::vector<std::pair<uint32_t, uint32_t>>> pairs(n_monomials_);
  std::vector<uint8_t> sum(2 * static_cast<size_t>(n));
  for (size_t r1 = 0; r1 < n_monomials_; ++r1) {
    const uint8_t* m1 = exponents(r1);
    for (size_t r2 = 0; r2 < n_monomials_; ++r2) {
      if (deg_x_[r1] + deg_x_[r2] > caps.x_cap) continue;
      if (deg_y_[r1] + deg_y_[r2] > caps.y_cap) continue;
      const uint8_t* m2 = exponents(r2);
      for (size_t i = 0; i < 2 * static_cast<size_t>(n); ++i)
        sum[i] = static_cast<uint8_t>(m1[i] + m2[i]);
      ptrdiff_t out = rank(sum.data());
      pairs[static_cast<size_t>(out)].emplace_back(static_cast<uint32_t>(r1),
                                                   static_cast<uint32_t>(r2));
    }
  }
  offsets_.resize(n_monomials_ + 1, 0);
  size_t total = 0;
  for (size_t r = 0; r < n_monomials_; ++r) {
    offsets_[r] = static_cast<uint32_t>(total);
    total += pairs[r].size();
  }
  offsets_[n_monomials_] = static_cast<uint32_t>(total);
  ia_.resize(total);
  ib_.resize(total);
  size_t m = 0;
  for (size_t r = 0; r < n_monomials_; ++r)
    for (auto [a, b] : pairs[r]) {
      ia_[m] = a;
      ib_[m] = b;
      ++m;
    }
  plan_ = jetkern::MulPlan{offsets_.data(), ia_.data(), ib_.data(), n_monomials_};
}

uint64_t JetSpace::pack_key(const uint8_t* exps) const {
  // 4 bits per exponent, 2n <= 16 slots; caps are bounded by 12 so this cannot collide
  uint64_t key = 0;
  for (int i = 0; i < 2 * caps_.dim; ++i) key = (key << 4) | (exps[i] & 0xF);
  return key;
}

ptrdiff_t JetSpace::rank(const uint8_t* exps) const {
  auto it = rank_.find(pack_key(exps));
  return it == rank_.end() ? -1 : static_cast<ptrdiff_t>(it->second);
}

ptrdiff_t JetSpace::rank(const std::vector<int>& alpha, const std::vector<int>& beta) const {
  const int n = caps_.dim;
  if (static_cast<int>(alpha.size()) != n || static_cast<int>(beta.size()) != n)
    fail(errc::order_budget, "multi-index length does not match the space dimension");
  std::vector<uint8_t> exps(2 * static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    if (alpha[static_cast<size_t>(i)] < 0 || beta[static_cast<size_t>(i)] < 0) return -1;
    if (alpha[static_cast<size_t>(i)] > 12 || beta[static_cast<size_t>(i)] > 12) return -1;
    exps[static_cast<size_t>(i)] = static_cast<uint8_t>(alpha[static_cast<size_t>(i)]);
    exps[static_cast<size_t>(n + i)] = static_cast<uint8_t>(beta[static_cast<size_t>(i)]);
  }
  return rank(exps.data());
}

std::shared_ptr<const JetSpace> JetSpace::get(const DegreeCaps& caps) {
  struct Key {
    int n, xc, yc;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    size_t operator()(const Key& k) const {
      return static_cast<size_t>(k.n) * 1315423911u ^ static_cast<size_t>(k.xc) * 2654435761u ^
             static_cast<size_t>(k.yc);
    }
  };
  static std::mutex mu;
  static std::unordered_map<Key, std::shared_ptr<const JetSpace>, KeyHash> cache;
  std::lock_guard<std::mutex> lock(mu);
  Key key{caps.dim, caps.x_cap, caps.y_cap};
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto space = std::shared_ptr<const JetSpace>(new JetSpace(caps));
  cache.emplace(key, space);
  return space;
}

std::shared_ptr<const JetSpace> JetSpace::x_reduced() const {
  if (caps_.x_cap == 0) fail(errc::order_budget, "x derivative exceeds the x-degree cap");
  return get({caps_.dim, caps_.x_cap - 1, caps_.y_cap});
}

std::shared_ptr<const JetSpace> JetSpace::y_reduced() const {
  if (caps_.y_cap == 0) fail(errc::order_budget, "y derivative exceeds the y-degree cap");
  return get({caps_.dim, caps_.x_cap, caps_.y_cap - 1});
}

} // namespace finsler
