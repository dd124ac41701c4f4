#include "ettk/polyalg/tpoly.hpp"

#include <algorithm>
#include <string>

namespace ettk::polyalg {

namespace {

std::vector<std::uint8_t> to_u8(std::span<const int> alpha, int order) {
  std::vector<std::uint8_t> a(alpha.size());
  int total = 0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (alpha[i] < 0) throw std::invalid_argument("TPoly: negative exponent in multi-index");
    total += alpha[i];
    a[i] = static_cast<std::uint8_t>(alpha[i]);
  }
  if (total > order) throw std::invalid_argument("TPoly: multi-index degree " + std::to_string(total) +
                                                 " exceeds order " + std::to_string(order));
  return a;
}

}  // namespace

TPoly::TPoly(std::shared_ptr<const IndexTable> table, double c0) : table_(std::move(table)) {
  coeffs_.assign(table_->size(), 0.0);
  coeffs_[0] = c0;
}

TPoly TPoly::constant(int nvars, int order, double value) {
  return TPoly(IndexTable::get(nvars, order), value);
}

TPoly TPoly::variable(int nvars, int order, int var, double scale) {
  if (var < 0 || var >= nvars)
    throw std::invalid_argument("TPoly: variable index " + std::to_string(var) + " out of range for nvars=" +
                                std::to_string(nvars));
  TPoly p(IndexTable::get(nvars, order), 0.0);
  // Degree-1 block is ordered x_0, x_1, ...: rank offset(1) + var... graded
  // descending lex puts e_0 first, e_1 second, etc.
  p.coeffs_[p.table_->offset(1) + static_cast<std::size_t>(var)] = scale;
  return p;
}

double TPoly::coeff(std::span<const int> alpha) const {
  check_valid();
  if (static_cast<int>(alpha.size()) != nvars())
    throw std::invalid_argument("TPoly: multi-index length mismatches nvars");
  const auto a = to_u8(alpha, order());
  return coeffs_[table_->rank(a)];
}

void TPoly::set_coeff(std::span<const int> alpha, double value) {
  check_valid();
  if (static_cast<int>(alpha.size()) != nvars())
    throw std::invalid_argument("TPoly: multi-index length mismatches nvars");
  const auto a = to_u8(alpha, order());
  coeffs_[table_->rank(a)] = value;
}

int TPoly::top_degree() const {
  check_valid();
  for (std::size_t r = coeffs_.size(); r-- > 0;)
    if (coeffs_[r] != 0.0) return table_->degree(r);
  return -1;
}

double TPoly::max_abs_on_degree(int d) const {
  check_valid();
  if (d < 0 || d > order()) return 0.0;
  double m = 0.0;
  for (std::size_t r = table_->offset(d); r < table_->offset(d + 1); ++r) m = std::max(m, std::abs(coeffs_[r]));
  return m;
}

std::vector<std::pair<std::size_t, double>> TPoly::degree_slice(int d) const {
  check_valid();
  std::vector<std::pair<std::size_t, double>> out;
  if (d < 0 || d > order()) return out;
  for (std::size_t r = table_->offset(d); r < table_->offset(d + 1); ++r)
    if (coeffs_[r] != 0.0) out.emplace_back(r, coeffs_[r]);
  return out;
}

const IndexTable& TPoly::require_same(const TPoly& a, const TPoly& b) {
  a.check_valid();
  b.check_valid();
  if (a.table_ != b.table_)
    throw std::invalid_argument("TPoly: operands live in different algebras (nvars " +
                                std::to_string(a.nvars()) + "/" + std::to_string(b.nvars()) + ", order " +
                                std::to_string(a.order()) + "/" + std::to_string(b.order()) + ")");
  return *a.table_;
}

TPoly& TPoly::operator+=(const TPoly& rhs) {
  require_same(*this, rhs);
  for (std::size_t r = 0; r < coeffs_.size(); ++r) coeffs_[r] += rhs.coeffs_[r];
  return *this;
}

TPoly& TPoly::operator-=(const TPoly& rhs) {
  require_same(*this, rhs);
  for (std::size_t r = 0; r < coeffs_.size(); ++r) coeffs_[r] -= rhs.coeffs_[r];
  return *this;
}

TPoly& TPoly::operator*=(double rhs) {
  check_valid();
  for (double& c : coeffs_) c *= rhs;
  return *this;
}

TPoly operator*(const TPoly& a, const TPoly& b) {
  const IndexTable& t = TPoly::require_same(a, b);
  const int n = t.nvars();
  const int order = t.order();
  TPoly out(a.table_, 0.0);
  out.coeffs_[0] = 0.0;
  std::vector<std::uint8_t> sum(static_cast<std::size_t>(n));
  for (std::size_t ra = 0; ra < a.coeffs_.size(); ++ra) {
    const double ca = a.coeffs_[ra];
    if (ca == 0.0) continue;
    const int da = t.degree(ra);
    const auto ea = t.exponents(ra);
    const std::size_t rb_end = t.offset(order - da + 1);
    for (std::size_t rb = 0; rb < rb_end; ++rb) {
      const double cb = b.coeffs_[rb];
      if (cb == 0.0) continue;
      const auto eb = t.exponents(rb);
      for (int i = 0; i < n; ++i) sum[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(ea[static_cast<std::size_t>(i)] + eb[static_cast<std::size_t>(i)]);
      out.coeffs_[t.rank(sum)] += ca * cb;
    }
  }
  return out;
}

double TPoly::eval(std::span<const double> point) const {
  check_valid();
  if (static_cast<int>(point.size()) != nvars())
    throw std::invalid_argument("TPoly: evaluation point length mismatches nvars");
  const int n = nvars();
  const int k = order();
  // pows[i*(k+1) + e] = point[i]^e
  std::vector<double> pows(static_cast<std::size_t>(n) * (k + 1));
  for (int i = 0; i < n; ++i) {
    pows[static_cast<std::size_t>(i) * (k + 1)] = 1.0;
    for (int e = 1; e <= k; ++e)
      pows[static_cast<std::size_t>(i) * (k + 1) + e] = pows[static_cast<std::size_t>(i) * (k + 1) + e - 1] * point[i];
  }
  double acc = 0.0;
  for (std::size_t r = 0; r < coeffs_.size(); ++r) {
    const double c = coeffs_[r];
    if (c == 0.0) continue;
    const auto e = table_->exponents(r);
    double mono = 1.0;
    for (int i = 0; i < n; ++i) mono *= pows[static_cast<std::size_t>(i) * (k + 1) + e[static_cast<std::size_t>(i)]];
    acc += c * mono;
  }
  return acc;
}

TPoly TPoly::truncated(int new_order, bool shrink) const {
  check_valid();
  if (new_order < 1 || new_order > order())
    throw std::invalid_argument("TPoly: truncation order must lie in [1, order]");
  if (!shrink) {
    TPoly out = *this;
    for (std::size_t r = table_->offset(new_order + 1); r < out.coeffs_.size(); ++r) out.coeffs_[r] = 0.0;
    return out;
  }
  TPoly out(IndexTable::get(nvars(), new_order), 0.0);
  // Graded-lex ranks agree between the two tables up to new_order.
  for (std::size_t r = 0; r < out.coeffs_.size(); ++r) out.coeffs_[r] = coeffs_[r];
  return out;
}

TPoly derivative(const TPoly& p, int var) {
  p.check_valid();
  const IndexTable& t = p.table();
  const int n = t.nvars();
  if (var < 0 || var >= n) throw std::invalid_argument("derivative: variable index out of range");
  TPoly out = TPoly::constant(n, t.order(), 0.0);
  auto oc = out.coeffs();
  auto pc = p.coeffs();
  std::vector<std::uint8_t> a(static_cast<std::size_t>(n));
  for (std::size_t r = 0; r < pc.size(); ++r) {
    const double c = pc[r];
    if (c == 0.0) continue;
    const auto e = t.exponents(r);
    const int ev = e[static_cast<std::size_t>(var)];
    if (ev == 0) continue;
    for (int i = 0; i < n; ++i) a[static_cast<std::size_t>(i)] = e[static_cast<std::size_t>(i)];
    a[static_cast<std::size_t>(var)] = static_cast<std::uint8_t>(ev - 1);
    oc[t.rank(a)] += c * static_cast<double>(ev);
  }
  return out;
}

TPoly antiderivative(const TPoly& p, int var) {
  p.check_valid();
  const IndexTable& t = p.table();
  const int n = t.nvars();
  const int k = t.order();
  if (var < 0 || var >= n) throw std::invalid_argument("antiderivative: variable index out of range");
  TPoly out = TPoly::constant(n, k, 0.0);
  auto oc = out.coeffs();
  auto pc = p.coeffs();
  std::vector<std::uint8_t> a(static_cast<std::size_t>(n));
  // Source terms of top degree would integrate past the truncation order and
  // are dropped; callers relying on order-k accuracy feed degree <= k-1 data.
  const std::size_t r_end = t.offset(k);
  for (std::size_t r = 0; r < r_end; ++r) {
    const double c = pc[r];
    if (c == 0.0) continue;
    const auto e = t.exponents(r);
    for (int i = 0; i < n; ++i) a[static_cast<std::size_t>(i)] = e[static_cast<std::size_t>(i)];
    const int ev = e[static_cast<std::size_t>(var)];
    a[static_cast<std::size_t>(var)] = static_cast<std::uint8_t>(ev + 1);
    oc[t.rank(a)] += c / static_cast<double>(ev + 1);
  }
  return out;
}

TPoly substitute(const TPoly& p, int var, const TPoly& replacement) {
  p.check_valid();
  replacement.check_valid();
  const IndexTable& t = p.table();
  const int n = t.nvars();
  const int k = t.order();
  if (var < 0 || var >= n) throw std::invalid_argument("substitute: variable index out of range");
  if (replacement.nvars() != n || replacement.order() != k)
    throw std::invalid_argument("substitute: replacement lives in a different algebra");
  // Group p by the exponent of x_var: p = sum_j g_j * x_var^j with g_j free of
  // x_var, then Horner in the replacement.
  std::vector<TPoly> g(static_cast<std::size_t>(k) + 1);
  std::vector<int> present(static_cast<std::size_t>(k) + 1, 0);
  for (auto& gj : g) gj = TPoly::constant(n, k, 0.0);
  auto pc = p.coeffs();
  std::vector<std::uint8_t> a(static_cast<std::size_t>(n));
  int jmax = 0;
  for (std::size_t r = 0; r < pc.size(); ++r) {
    const double c = pc[r];
    if (c == 0.0) continue;
    const auto e = t.exponents(r);
    const int j = e[static_cast<std::size_t>(var)];
    for (int i = 0; i < n; ++i) a[static_cast<std::size_t>(i)] = e[static_cast<std::size_t>(i)];
    a[static_cast<std::size_t>(var)] = 0;
    g[static_cast<std::size_t>(j)].coeffs()[t.rank(a)] = c;
    present[static_cast<std::size_t>(j)] = 1;
    jmax = std::max(jmax, j);
  }
  TPoly acc = g[static_cast<std::size_t>(jmax)];
  for (int j = jmax - 1; j >= 0; --j) {
    acc = acc * replacement;
    if (present[static_cast<std::size_t>(j)]) acc += g[static_cast<std::size_t>(j)];
  }
  return acc;
}

TPoly mul_exact(const TPoly& a, const TPoly& b) {
  a.check_valid();
  b.check_valid();
  if (a.nvars() != b.nvars()) throw std::invalid_argument("mul_exact: operand nvars differ");
  const int n = a.nvars();
  const IndexTable& ta = a.table();
  const IndexTable& tb = b.table();
  TPoly out = TPoly::constant(n, a.order() + b.order(), 0.0);
  const IndexTable& to = out.table();
  auto oc = out.coeffs();
  auto ac = a.coeffs();
  auto bc = b.coeffs();
  std::vector<std::uint8_t> sum(static_cast<std::size_t>(n));
  for (std::size_t ra = 0; ra < ac.size(); ++ra) {
    const double ca = ac[ra];
    if (ca == 0.0) continue;
    const auto ea = ta.exponents(ra);
    for (std::size_t rb = 0; rb < bc.size(); ++rb) {
      const double cb = bc[rb];
      if (cb == 0.0) continue;
      const auto eb = tb.exponents(rb);
      for (int i = 0; i < n; ++i) sum[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(ea[static_cast<std::size_t>(i)] + eb[static_cast<std::size_t>(i)]);
      oc[to.rank(sum)] += ca * cb;
    }
  }
  return out;
}

TPoly pow_exact(const TPoly& p, int n) {
  p.check_valid();
  if (n < 1) throw std::invalid_argument("pow_exact: exponent must be >= 1");
  TPoly acc = p;
  for (int j = 1; j < n; ++j) acc = mul_exact(acc, p);
  return acc;
}

TPoly promote(const TPoly& p, int new_nvars, int new_order) {
  p.check_valid();
  const int n = p.nvars();
  if (new_nvars < n || new_order < p.order())
    throw std::invalid_argument("promote: target algebra must be at least as wide and as high-order");
  TPoly out = TPoly::constant(new_nvars, new_order, 0.0);
  const IndexTable& to = out.table();
  const IndexTable& tp = p.table();
  auto oc = out.coeffs();
  auto pc = p.coeffs();
  std::vector<std::uint8_t> a(static_cast<std::size_t>(new_nvars), 0);
  for (std::size_t r = 0; r < pc.size(); ++r) {
    const double c = pc[r];
    if (c == 0.0) continue;
    const auto e = tp.exponents(r);
    for (int i = 0; i < n; ++i) a[static_cast<std::size_t>(i)] = e[static_cast<std::size_t>(i)];
    oc[to.rank(a)] = c;
  }
  return out;
}

TPoly drop_variable(const TPoly& p, int var) {
  p.check_valid();
  const int n = p.nvars();
  if (n < 2) throw std::invalid_argument("drop_variable: polynomial must have at least 2 variables");
  if (var < 0 || var >= n) throw std::invalid_argument("drop_variable: variable index out of range");
  const IndexTable& tp = p.table();
  TPoly out = TPoly::constant(n - 1, p.order(), 0.0);
  const IndexTable& to = out.table();
  auto oc = out.coeffs();
  auto pc = p.coeffs();
  std::vector<std::uint8_t> a(static_cast<std::size_t>(n) - 1);
  for (std::size_t r = 0; r < pc.size(); ++r) {
    const double c = pc[r];
    if (c == 0.0) continue;
    const auto e = tp.exponents(r);
    if (e[static_cast<std::size_t>(var)] != 0)
      throw std::invalid_argument("drop_variable: polynomial still depends on variable " + std::to_string(var));
    int j = 0;
    for (int i = 0; i < n; ++i) {
      if (i == var) continue;
      a[static_cast<std::size_t>(j++)] = e[static_cast<std::size_t>(i)];
    }
    oc[to.rank(a)] = c;
  }
  return out;
}

TPoly compose(const TPoly& p, std::span<const TPoly> args) {
  p.check_valid();
  if (static_cast<int>(args.size()) != p.nvars())
    throw std::invalid_argument("compose: argument count mismatches nvars");
  for (const TPoly& q : args) q.check_valid();
  for (std::size_t i = 1; i < args.size(); ++i)
    if (args[i].nvars() != args[0].nvars() || args[i].order() != args[0].order())
      throw std::invalid_argument("compose: arguments live in different algebras");
  const IndexTable& t = p.table();
  const int n = t.nvars();
  const int k = t.order();
  const TPoly one = TPoly::constant(args[0].nvars(), args[0].order(), 1.0);
  // Power cache q_i^e, built on demand up to the truncation order of p.
  std::vector<std::vector<TPoly>> pows(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) pows[static_cast<std::size_t>(i)].push_back(one);
  auto power = [&](int i, int e) -> const TPoly& {
    auto& v = pows[static_cast<std::size_t>(i)];
    while (static_cast<int>(v.size()) <= e) v.push_back(v.back() * args[static_cast<std::size_t>(i)]);
    return v[static_cast<std::size_t>(e)];
  };
  TPoly acc = TPoly::constant(args[0].nvars(), args[0].order(), 0.0);
  auto pc = p.coeffs();
  for (std::size_t r = 0; r < pc.size(); ++r) {
    const double c = pc[r];
    if (c == 0.0) continue;
    const auto e = t.exponents(r);
    TPoly mono = one;
    bool first = true;
    for (int i = 0; i < n; ++i) {
      const int ei = e[static_cast<std::size_t>(i)];
      if (ei == 0) continue;
      if (first) {
        mono = power(i, ei);
        first = false;
      } else {
        mono = mono * power(i, ei);
      }
    }
    (void)k;
    acc += mono * c;
  }
  return acc;
}

double jet_magnitude(const TPoly& p, double rho) {
  p.check_valid();
  double m = std::abs(p.coeff0());
  double w = 1.0;
  for (int d = 1; d <= p.order(); ++d) {
    w *= rho;
    m += w * p.max_abs_on_degree(d);
  }
  return m;
}

}  // namespace ettk::polyalg
