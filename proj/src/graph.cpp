#include "quasirand/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <random>

#include "quasirand/error.hpp"

namespace quasirand {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "invalid-argument";
    case ErrorKind::kUnsupported: return "unsupported";
    case ErrorKind::kParse: return "parse-error";
    case ErrorKind::kWorkCap: return "work-cap-exceeded";
    case ErrorKind::kPrecondition: return "precondition";
    case ErrorKind::kReservoirShortfall: return "reservoir-shortfall";
    case ErrorKind::kConvergenceFailure: return "convergence-failure";
    case ErrorKind::kRetriesExhausted: return "retries-exhausted";
  }
  return "unknown";
}

EdgeProbability EdgeProbability::from_double(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "edge probability must lie in (0,1)");
  }
  EdgeProbability out;
  out.value_ = p;
  return out;
}

EdgeProbability EdgeProbability::from_rational(const Rational& r) {
  if (!(r > 0 && r < 1)) {
    throw Error(ErrorKind::kInvalidArgument, "edge probability must lie in (0,1)");
  }
  EdgeProbability out;
  out.value_ = r.get_d();
  out.exact_ = r;
  return out;
}

EdgeProbability EdgeProbability::from_fraction(std::int64_t num, std::int64_t den) {
  if (den == 0) throw Error(ErrorKind::kInvalidArgument, "zero denominator");
  return from_rational(make_rational(num, den));
}

EdgeProbability EdgeProbability::parse(std::string_view text) {
  auto slash = text.find('/');
  if (slash != std::string_view::npos) {
    std::int64_t num = 0;
    std::int64_t den = 0;
    auto a = text.substr(0, slash);
    auto b = text.substr(slash + 1);
    auto r1 = std::from_chars(a.data(), a.data() + a.size(), num);
    auto r2 = std::from_chars(b.data(), b.data() + b.size(), den);
    if (r1.ec != std::errc() || r1.ptr != a.data() + a.size() || r2.ec != std::errc() ||
        r2.ptr != b.data() + b.size()) {
      throw Error(ErrorKind::kInvalidArgument, "malformed fraction '" + std::string(text) + "'");
    }
    return from_fraction(num, den);
  }
  try {
    std::size_t used = 0;
    double v = std::stod(std::string(text), &used);
    if (used != text.size()) throw std::invalid_argument("trailing");
    return from_double(v);
  } catch (const std::logic_error&) {
    throw Error(ErrorKind::kInvalidArgument, "malformed probability '" + std::string(text) + "'");
  }
}

const Rational& EdgeProbability::exact() const {
  if (!exact_) {
    throw Error(ErrorKind::kUnsupported, "probability has no exact rational form");
  }
  return *exact_;
}

EdgeProbability EdgeProbability::complement() const {
  if (exact_) return from_rational(Rational(1 - *exact_));
  return from_double(1.0 - value_);
}

std::string EdgeProbability::to_string() const {
  if (exact_) return exact_->get_str();
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value_);
  return std::string(buf, res.ptr);
}

Graph::Graph(int n, bool loops_enabled)
    : n_(n), words_((n + 63) / 64), loops_enabled_(loops_enabled) {
  if (n < 0) throw Error(ErrorKind::kInvalidArgument, "negative vertex count");
  rows_.assign(static_cast<std::size_t>(n) * words_, 0);
  loops_.assign(loops_enabled ? n : 0, 0);
}

void Graph::set_edge(int i, int j, bool present) {
  if (i == j) throw Error(ErrorKind::kInvalidArgument, "pair endpoints must differ");
  if (has_edge(i, j) == present) return;
  toggle_edge(i, j);
}

void Graph::toggle_edge(int i, int j) {
  if (i == j) throw Error(ErrorKind::kInvalidArgument, "pair endpoints must differ");
  if (i < 0 || j < 0 || i >= n_ || j >= n_) {
    throw Error(ErrorKind::kInvalidArgument, "vertex out of range");
  }
  const std::uint64_t bi = std::uint64_t{1} << (j & 63);
  const std::uint64_t bj = std::uint64_t{1} << (i & 63);
  auto& wi = rows_[static_cast<std::size_t>(i) * words_ + (j >> 6)];
  auto& wj = rows_[static_cast<std::size_t>(j) * words_ + (i >> 6)];
  edges_ += (wi & bi) ? -1 : 1;
  wi ^= bi;
  wj ^= bj;
}

void Graph::set_loop(int i, bool present) {
  if (!loops_enabled_) {
    throw Error(ErrorKind::kUnsupported, "loops are not enabled for this graph");
  }
  loops_[i] = present ? 1 : 0;
}

int Graph::loop_count() const noexcept {
  return static_cast<int>(std::count(loops_.begin(), loops_.end(), std::uint8_t{1}));
}

int Graph::degree(int i) const {
  int d = 0;
  for (auto w : row(i)) d += std::popcount(w);
  return d;
}

int Graph::max_degree() const {
  int best = 0;
  for (int i = 0; i < n_; ++i) best = std::max(best, degree(i));
  return best;
}

int Graph::common_neighbors(int i, int j) const {
  auto a = row(i);
  auto b = row(j);
  int c = 0;
  for (int w = 0; w < words_; ++w) c += std::popcount(a[w] & b[w]);
  return c;
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(static_cast<std::size_t>(edges_));
  for (int i = 0; i < n_; ++i) {
    auto r = row(i);
    for (int w = (i + 1) >> 6; w < words_; ++w) {
      std::uint64_t bits = r[w];
      if (w == ((i + 1) >> 6)) bits &= ~std::uint64_t{0} << ((i + 1) & 63);
      while (bits) {
        int j = w * 64 + std::countr_zero(bits);
        bits &= bits - 1;
        out.push_back({i, j});
      }
    }
  }
  return out;
}

std::int64_t binomial(std::int64_t n, int k) {
  if (k < 0 || n < k) return 0;
  std::int64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

Graph sample_gnp(int n, const EdgeProbability& p, Seed seed, bool loops) {
  if (n < 1) throw Error(ErrorKind::kInvalidArgument, "n must be at least 1");
  Graph g(n, loops);
  std::mt19937_64 rng(seed.value);
  const double pv = p.value();
  auto draw = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53 < pv; };
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (draw()) g.toggle_edge(i, j);
    }
  }
  if (loops) {
    for (int i = 0; i < n; ++i) g.set_loop(i, draw());
  }
  return g;
}

Graph complement(const Graph& g) {
  const int n = g.order();
  Graph out(n, g.loops_enabled());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (!g.has_edge(i, j)) out.toggle_edge(i, j);
    }
    if (g.loops_enabled()) out.set_loop(i, !g.has_loop(i));
  }
  return out;
}

Graph flip_pair(const Graph& g, int i, int j) {
  if (i == j) throw Error(ErrorKind::kInvalidArgument, "invalid pair: i == j");
  Graph out = g;
  out.toggle_edge(i, j);
  return out;
}

Rational nearest_integer_distance_exact(int n, const Rational& p) {
  if (n < 2) throw Error(ErrorKind::kInvalidArgument, "n must be at least 2");
  Rational x = p * Rational(choose2(n));
  mpz_class fl;
  mpz_fdiv_q(fl.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  Rational frac = x - Rational(fl);
  Rational other = 1 - frac;
  return frac < other ? frac : other;
}

double nearest_integer_distance(int n, const EdgeProbability& p) {
  if (p.is_exact()) return nearest_integer_distance_exact(n, p.exact()).get_d();
  if (n < 2) throw Error(ErrorKind::kInvalidArgument, "n must be at least 2");
  const double x = p.value() * static_cast<double>(choose2(n));
  return std::abs(x - std::nearbyint(x));
}

std::int64_t nearest_edge_count(int n, const EdgeProbability& p) {
  if (p.is_exact()) {
    Rational x = p.exact() * Rational(choose2(n));
    mpz_class fl;
    mpz_fdiv_q(fl.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    Rational frac = x - Rational(fl);
    std::int64_t base = fl.get_si();
    return frac > Rational(1, 2) ? base + 1 : base;
  }
  const double x = p.value() * static_cast<double>(choose2(n));
  const double fl = std::floor(x);
  return static_cast<std::int64_t>(x - fl > 0.5 ? fl + 1 : fl);
}

}  // namespace quasirand
