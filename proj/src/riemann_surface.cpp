#include "wsinv/riemann_surface.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>

#include "wsinv/exact_linalg.hpp"

namespace wsinv {

namespace {

using Cplx = std::complex<double>;
constexpr double kPi = 3.141592653589793238462643383279502884;

std::vector<Cplx> poly_from_roots(const std::vector<Cplx>& roots) {
  std::vector<Cplx> c{1.0};
  for (Cplx r : roots) {
    std::vector<Cplx> next(c.size() + 1, 0.0);
    for (std::size_t k = 0; k < c.size(); ++k) {
      next[k + 1] += c[k];
      next[k] -= r * c[k];
    }
    c = std::move(next);
  }
  return c;  // ascending coefficients, monic
}

Cplx poly_eval(const std::vector<Cplx>& c, Cplx x) {
  Cplx acc = 0.0;
  for (std::size_t k = c.size(); k-- > 0;) acc = acc * x + c[k];
  return acc;
}

// f = (x - root) u for an exact root; synthetic division, ascending output.
std::vector<Cplx> poly_deflate(const std::vector<Cplx>& c, Cplx root) {
  std::size_t d = c.size() - 1;
  std::vector<Cplx> u(d);
  Cplx carry = 0.0;
  for (std::size_t k = d; k >= 1; --k) {
    carry = c[k] + root * carry;
    u[k - 1] = carry;
  }
  return u;
}

// Analytic continuation of sqrt(f) along a straight segment, bisecting until
// each hop is an unambiguous nearest-value choice.
Cplx continue_sqrt(const std::vector<Cplx>& f, Cplx x_from, Cplx y_from, Cplx x_to,
                   int depth = 0) {
  Cplx target = std::sqrt(poly_eval(f, x_to));
  double keep = std::abs(target - y_from), flip = std::abs(-target - y_from);
  if (std::min(keep, flip) < 0.25 * std::max(keep, flip))
    return keep <= flip ? target : -target;
  if (depth >= 48)
    throw ConvergenceError("square-root continuation lost track of the sheet");
  Cplx mid = 0.5 * (x_from + x_to);
  Cplx y_mid = continue_sqrt(f, x_from, y_from, mid, depth + 1);
  return continue_sqrt(f, mid, y_mid, x_to, depth + 1);
}

const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<double> x(n), w(n);
  for (int i = 0; i < n; ++i) {
    double t = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double p1 = t, dp = 1.0;
    for (int pass = 0; pass < 100; ++pass) {
      double p0 = 1.0;
      p1 = t;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (t * p1 - p0) / (t * t - 1.0);
      double step = p1 / dp;
      t -= step;
      if (std::abs(step) < 1e-15) break;
    }
    x[i] = t;
    w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
  }
  return cache.emplace(n, std::make_pair(std::move(x), std::move(w))).first->second;
}

double segment_distance(Cplx a, Cplx b, Cplx p) {
  Cplx d = b - a;
  double len2 = std::norm(d);
  if (len2 == 0) return std::abs(p - a);
  double t = std::clamp((std::conj(d) * (p - a)).real() / len2, 0.0, 1.0);
  return std::abs(p - (a + t * d));
}

double cross2(Cplx a, Cplx b) { return a.real() * b.imag() - a.imag() * b.real(); }

struct Loop {
  std::vector<Cplx> xs, ys;  // closed contour samples, xs[(k+1)%N] follows xs[k]
  Eigen::VectorXcd periods;  // integrals of x^{i-1} dx / y, i = 1..g
};

// Trapezoid sum over an ellipse enclosing two branch points; node counts
// double until the period vector settles. The integrand is periodic analytic
// so convergence is geometric. y is continued around the contour and must
// close up: a loop around exactly two branch points has trivial monodromy.
Loop integrate_pair_loop(const std::vector<Cplx>& f, int g, Cplx center, double major,
                         double minor, Cplx phase, double tol) {
  Eigen::VectorXcd prev;
  for (int n = 128; n <= 32768; n *= 2) {
    std::vector<Cplx> xs(n), ys(n);
    for (int k = 0; k < n; ++k) {
      double t = 2.0 * kPi * k / n;
      xs[k] = center + phase * Cplx(major * std::cos(t), minor * std::sin(t));
    }
    ys[0] = std::sqrt(poly_eval(f, xs[0]));
    bool lost = false;
    try {
      for (int k = 1; k < n; ++k) ys[k] = continue_sqrt(f, xs[k - 1], ys[k - 1], xs[k]);
      Cplx closure = continue_sqrt(f, xs[n - 1], ys[n - 1], xs[0]);
      if (std::abs(closure - ys[0]) > 1e-6 * (1.0 + std::abs(ys[0]))) lost = true;
    } catch (const ConvergenceError&) {
      lost = true;
    }
    if (lost) {
      if (n == 32768)
        throw ConvergenceError("loop monodromy failed to close around a branch pair");
      prev.resize(0);
      continue;
    }
    Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(g);
    for (int k = 0; k < n; ++k) {
      double t = 2.0 * kPi * k / n;
      Cplx dxdt = phase * Cplx(-major * std::sin(t), minor * std::cos(t));
      Cplx xp = 1.0;
      for (int i = 0; i < g; ++i) {
        acc[i] += xp * dxdt / ys[k];
        xp *= xs[k];
      }
    }
    acc *= 2.0 * kPi / n;
    if (prev.size() && (acc - prev).cwiseAbs().maxCoeff() <
                           tol * std::max(1.0, acc.cwiseAbs().maxCoeff())) {
      Loop out;
      out.xs = std::move(xs);
      out.ys = std::move(ys);
      out.periods = acc;
      return out;
    }
    prev = acc;
  }
  throw ConvergenceError("loop quadrature did not converge");
}

// Ellipse around exactly {p, q}: aligned with the segment, fattened by delta,
// shrunk until every other branch point stays well outside.
Loop loop_around_pair(const std::vector<Cplx>& f, int g, const std::vector<Cplx>& branch,
                      std::size_t ip, std::size_t iq, double tol) {
  Cplx p = branch[ip], q = branch[iq];
  Cplx center = 0.5 * (p + q);
  double halfgap = 0.5 * std::abs(q - p);
  Cplx phase = (q - p) / std::abs(q - p);
  double delta = halfgap;
  for (int tries = 0; tries < 60; ++tries, delta *= 0.7) {
    double major = halfgap + delta, minor = delta;
    bool clear = true;
    for (std::size_t j = 0; j < branch.size() && clear; ++j) {
      if (j == ip || j == iq) continue;
      Cplx xi = (branch[j] - center) / phase;
      double level = std::pow(xi.real() / major, 2) + std::pow(xi.imag() / minor, 2);
      if (level < 1.44) clear = false;
    }
    if (clear) return integrate_pair_loop(f, g, center, major, minor, phase, tol);
  }
  throw ConvergenceError("no ellipse separates a branch pair from the others");
}

// Signed intersection count of two contours on the surface: transversal
// x-plane crossings where the sheets agree, each contributing the orientation
// sign of the two tangents. Contours are resampled to ~1024-gons first.
long loop_intersection(const Loop& la, const Loop& lb) {
  auto strided = [](const Loop& l) {
    std::size_t stride = std::max<std::size_t>(1, l.xs.size() / 1024);
    std::vector<std::size_t> idx;
    for (std::size_t k = 0; k < l.xs.size(); k += stride) idx.push_back(k);
    return idx;
  };
  std::vector<std::size_t> ia = strided(la), ib = strided(lb);
  double acc = 0;
  for (std::size_t s = 0; s < ia.size(); ++s) {
    Cplx a0 = la.xs[ia[s]], a1 = la.xs[ia[(s + 1) % ia.size()]];
    Cplx ya0 = la.ys[ia[s]], ya1 = la.ys[ia[(s + 1) % ia.size()]];
    Cplx u = a1 - a0;
    for (std::size_t t = 0; t < ib.size(); ++t) {
      Cplx b0 = lb.xs[ib[t]], b1 = lb.xs[ib[(t + 1) % ib.size()]];
      Cplx yb0 = lb.ys[ib[t]], yb1 = lb.ys[ib[(t + 1) % ib.size()]];
      Cplx v = b1 - b0;
      double cuv = cross2(u, v);
      if (std::abs(cuv) < 1e-18) continue;
      Cplx w = b0 - a0;
      double su = cross2(w, v) / cuv;
      double tv = cross2(w, u) / cuv;
      if (su < 0.0 || su >= 1.0 || tv < 0.0 || tv >= 1.0) continue;
      Cplx ya = ya0 + su * (ya1 - ya0);
      Cplx yb = yb0 + tv * (yb1 - yb0);
      if (std::abs(ya - yb) < std::abs(ya + yb)) acc += cuv > 0 ? 1.0 : -1.0;
    }
  }
  long rounded = std::lround(acc);
  if (std::abs(acc - rounded) > 0.25)
    throw ConvergenceError("intersection count is not close to an integer");
  return rounded;
}

// Integer symplectic reduction of a skew form S (2g x 2g): returns U with
// U S U^T = J in the order (a_1..a_g, b_1..b_g). Requires a +-1 pivot at each
// stage, which chain-loop intersection forms provide.
std::vector<std::vector<long>> symplectic_basis(std::vector<std::vector<long>> s) {
  std::size_t n = s.size();
  std::vector<std::vector<long>> u(n, std::vector<long>(n, 0));
  for (std::size_t i = 0; i < n; ++i) u[i][i] = 1;

  auto swap_rc = [&](std::size_t i, std::size_t j) {
    if (i == j) return;
    std::swap(s[i], s[j]);
    for (auto& row : s) std::swap(row[i], row[j]);
    std::swap(u[i], u[j]);
  };
  auto add_rc = [&](std::size_t dst, std::size_t src, long c) {
    if (c == 0) return;
    for (std::size_t k = 0; k < n; ++k) s[dst][k] += c * s[src][k];
    for (std::size_t k = 0; k < n; ++k) s[k][dst] += c * s[k][src];
    for (std::size_t k = 0; k < n; ++k) u[dst][k] += c * u[src][k];
  };

  for (std::size_t k = 0; k + 1 < n; k += 2) {
    std::size_t pi = n, pj = n;
    for (std::size_t i = k; i < n && pi == n; ++i)
      for (std::size_t j = k; j < n; ++j)
        if (s[i][j] == 1 || s[i][j] == -1) {
          pi = i;
          pj = j;
          break;
        }
    if (pi == n) throw ValidationError("intersection form has no unimodular pivot");
    swap_rc(k, pi);
    if (pj == k) pj = pi;  // the swap moved the pivot column
    swap_rc(k + 1, pj);
    if (s[k][k + 1] == -1) swap_rc(k, k + 1);
    for (std::size_t r = k + 2; r < n; ++r) {
      add_rc(r, k, -s[r][k + 1]);  // s[k][k] = 0 keeps s[r][k] intact
      add_rc(r, k + 1, s[r][k]);   // s[k+1][k+1] = 0 keeps s[r][k+1] intact
    }
  }

  // (a1, b1, a2, b2, ...) -> (a1, ..., ag, b1, ..., bg)
  std::size_t g = n / 2;
  std::vector<std::vector<long>> out(n);
  for (std::size_t i = 0; i < g; ++i) {
    out[i] = u[2 * i];
    out[g + i] = u[2 * i + 1];
  }
  return out;
}

std::vector<std::vector<long>> apply_basis(const std::vector<std::vector<long>>& u,
                                           const std::vector<std::vector<long>>& s0) {
  std::size_t n = u.size();
  std::vector<std::vector<long>> t(n, std::vector<long>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      long acc = 0;
      for (std::size_t p = 0; p < n; ++p)
        for (std::size_t q = 0; q < n; ++q) acc += u[i][p] * s0[p][q] * u[j][q];
      t[i][j] = acc;
    }
  return t;
}

struct LegResult {
  Eigen::VectorXcd integrals;
  Cplx y_end;
};

// Gauss-Legendre integration of the holomorphic basis along a straight
// segment, doubling the order until the vector settles. The y sheet is fixed
// by the seed value at x_from and carried node to node.
LegResult integrate_plain_leg(const std::vector<Cplx>& f, int g, Cplx x_from, Cplx y_from,
                              Cplx x_to, double tol) {
  Eigen::VectorXcd prev;
  for (int n = 16; n <= 2048; n *= 2) {
    const auto& [nodes, weights] = gauss_legendre(n);
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return nodes[a] < nodes[b]; });
    Cplx d = x_to - x_from;
    Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(g);
    Cplx x_prev = x_from, y_prev = y_from;
    for (int idx : order) {
      Cplx x = x_from + 0.5 * (nodes[idx] + 1.0) * d;
      Cplx y = continue_sqrt(f, x_prev, y_prev, x);
      Cplx xp = 1.0;
      for (int i = 0; i < g; ++i) {
        acc[i] += weights[idx] * xp / y;
        xp *= x;
      }
      x_prev = x;
      y_prev = y;
    }
    acc *= 0.5 * d;
    Cplx y_end = continue_sqrt(f, x_prev, y_prev, x_to);
    if (prev.size() && (acc - prev).cwiseAbs().maxCoeff() <
                           tol * std::max(1.0, acc.cwiseAbs().maxCoeff()))
      return {acc, y_end};
    prev = acc;
  }
  throw ConvergenceError("path quadrature did not converge on a segment");
}

// Leg leaving a branch point b toward w. Substituting x = b + s^2 (w - b)
// removes the square-root singularity: with f = (x - b) u(x) and
// G(s) = (w - b) u(x(s)), we get y = s h(s) for h = sqrt(G), and
// x^{i-1} dx / y = 2 (w - b) x^{i-1} / h ds, smooth on [0, 1].
// The sign of h near s = 0 is a free choice; flipping it negates the whole
// integral, which swaps the two preimages and is absorbed by the caller.
LegResult integrate_branch_leg(const std::vector<Cplx>& f, int g, Cplx b, Cplx w,
                               double tol) {
  std::vector<Cplx> u_poly = poly_deflate(f, b);
  Cplx d = w - b;
  auto g_of = [&](double s) { return d * poly_eval(u_poly, b + s * s * d); };
  // continuation of h = sqrt(G) from s_from (value h_from) to s_to, bisecting
  std::function<Cplx(double, Cplx, double, int)> cont = [&](double s_from, Cplx h_from,
                                                            double s_to, int depth) {
    Cplx target = std::sqrt(g_of(s_to));
    double keep = std::abs(target - h_from), flip = std::abs(-target - h_from);
    if (std::min(keep, flip) < 0.25 * std::max(keep, flip))
      return keep <= flip ? target : -target;
    if (depth >= 48)
      throw ConvergenceError("square-root continuation lost track of the sheet");
    double sm = 0.5 * (s_from + s_to);
    Cplx hm = cont(s_from, h_from, sm, depth + 1);
    return cont(sm, hm, s_to, depth + 1);
  };
  Eigen::VectorXcd prev;
  for (int n = 16; n <= 2048; n *= 2) {
    const auto& [nodes, weights] = gauss_legendre(n);
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](int a, int bb) { return nodes[a] < nodes[bb]; });
    Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(g);
    double s_prev = 0.0;
    Cplx h_prev = std::sqrt(g_of(0.0));
    for (int idx : order) {
      double s = 0.5 * (nodes[idx] + 1.0);
      Cplx h = cont(s_prev, h_prev, s, 0);
      Cplx x = b + s * s * d;
      Cplx xp = 1.0;
      for (int i = 0; i < g; ++i) {
        acc[i] += weights[idx] * 2.0 * d * xp / h;
        xp *= x;
      }
      s_prev = s;
      h_prev = h;
    }
    acc *= 0.5;
    Cplx h_end = cont(s_prev, h_prev, 1.0, 0);  // y at w is 1 * h(1)
    if (prev.size() && (acc - prev).cwiseAbs().maxCoeff() <
                           tol * std::max(1.0, acc.cwiseAbs().maxCoeff()))
      return {acc, h_end};
    prev = acc;
  }
  throw ConvergenceError("branch-leg quadrature did not converge");
}

// Tail leg from a finite waypoint x0 (reached on sheet y0) out to infinity,
// for odd degree d = 2g+1 where infinity is a single branch point. With
// x = x0 / s^2, s running from 1 to 0, y = sqrt(G(s)) / s^d for
// G(s) = sum_k f_k x0^k s^{2(d-k)}, and the ds-integrand of x^{i-1} dx / y
// is -2 x0^i s^{d-2i-1} / sqrt(G), smooth on [0, 1] since i <= g; the
// orientation s: 1 -> 0 turns that into +2 x0^i ... summed over [0, 1].
LegResult integrate_infinity_leg(const std::vector<Cplx>& f, int g, Cplx x0, Cplx y0,
                                 double tol) {
  int d = static_cast<int>(f.size()) - 1;
  auto g_of = [&](double s) {
    Cplx acc = 0.0;
    Cplx x0p = 1.0;
    for (int k = 0; k <= d; ++k) {
      acc += f[k] * x0p * std::pow(s, 2 * (d - k));
      x0p *= x0;
    }
    return acc;
  };
  std::function<Cplx(double, Cplx, double, int)> cont = [&](double s_from, Cplx h_from,
                                                            double s_to, int depth) {
    Cplx target = std::sqrt(g_of(s_to));
    double keep = std::abs(target - h_from), flip = std::abs(-target - h_from);
    if (std::min(keep, flip) < 0.25 * std::max(keep, flip))
      return keep <= flip ? target : -target;
    if (depth >= 48)
      throw ConvergenceError("square-root continuation lost track of the sheet");
    double sm = 0.5 * (s_from + s_to);
    Cplx hm = cont(s_from, h_from, sm, depth + 1);
    return cont(sm, hm, s_to, depth + 1);
  };
  Eigen::VectorXcd prev;
  for (int n = 16; n <= 2048; n *= 2) {
    const auto& [nodes, weights] = gauss_legendre(n);
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    // descending s: the sheet is seeded at s = 1 where sqrt(G(1)) = y(x0)
    std::sort(order.begin(), order.end(),
              [&](int a, int bb) { return nodes[a] > nodes[bb]; });
    Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(g);
    double s_prev = 1.0;
    Cplx h_prev = y0;
    for (int idx : order) {
      double s = 0.5 * (nodes[idx] + 1.0);
      Cplx h = cont(s_prev, h_prev, s, 0);
      Cplx x0p = x0;
      for (int i = 1; i <= g; ++i) {
        acc[i - 1] += weights[idx] * 2.0 * x0p * std::pow(s, d - 2 * i - 1) / h;
        x0p *= x0;
      }
      s_prev = s;
      h_prev = h;
    }
    acc *= 0.5;
    if (prev.size() && (acc - prev).cwiseAbs().maxCoeff() <
                           tol * std::max(1.0, acc.cwiseAbs().maxCoeff()))
      return {acc, 0.0};
    prev = acc;
  }
  throw ConvergenceError("tail quadrature toward infinity did not converge");
}

}  // namespace

CurveAnalytic CurveAnalytic::from_period_matrix(const PeriodMatrix& pm) {
  if (pm.genus() != 1)
    throw ValidationError("direct period-matrix construction is only supported in genus 1");
  CurveAnalytic c;
  c.pm_ = pm;
  c.torus_mode_ = true;
  CVec kappa(1);
  kappa[0] = 0.5 * (1.0 + pm.tau()(0, 0));
  c.kappa_ = kappa;
  return c;
}

CurveAnalytic CurveAnalytic::from_branch_points(std::vector<Cplx> branch, double tol) {
  std::size_t nb = branch.size();
  if (nb < 3 || nb > 6)
    throw ValidationError("need 3 to 6 finite branch points (genus 1 or 2)");
  int g = static_cast<int>((nb - 1) / 2);
  bool odd_model = (nb % 2 == 1);
  for (std::size_t i = 0; i < nb; ++i)
    for (std::size_t j = i + 1; j < nb; ++j)
      if (std::abs(branch[i] - branch[j]) < 1e-12)
        throw ValidationError("branch points must be distinct");
  std::sort(branch.begin(), branch.end(), [](Cplx a, Cplx b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });

  CurveAnalytic c;
  c.torus_mode_ = false;
  c.tol_ = tol;
  c.branch_ = branch;
  c.f_ = poly_from_roots(branch);

  // Chain loops: one ellipse around each consecutive pair of branch points.
  std::size_t n_loops = nb - 1;
  std::vector<Loop> loops;
  loops.reserve(n_loops);
  for (std::size_t k = 0; k + 1 < nb; ++k)
    loops.push_back(loop_around_pair(c.f_, g, branch, k, k + 1, tol));

  std::vector<std::vector<long>> s_full(n_loops, std::vector<long>(n_loops, 0));
  for (std::size_t i = 0; i < n_loops; ++i)
    for (std::size_t j = i + 1; j < n_loops; ++j) {
      long v = loop_intersection(loops[i], loops[j]);
      s_full[i][j] = v;
      s_full[j][i] = -v;
    }

  // Select 2g loops forming a homology basis. On an odd model all 2g chain
  // loops are independent; on an even model one of the 2g+1 is redundant and
  // dropping the right one leaves a unimodular intersection form.
  std::vector<std::size_t> chosen;
  if (n_loops == static_cast<std::size_t>(2 * g)) {
    for (std::size_t i = 0; i < n_loops; ++i) chosen.push_back(i);
  } else {
    for (std::size_t drop = 0; drop < n_loops && chosen.empty(); ++drop) {
      std::vector<std::size_t> cand;
      for (std::size_t i = 0; i < n_loops; ++i)
        if (i != drop) cand.push_back(i);
      IntMat m(cand.size(), std::vector<Int>(cand.size()));
      for (std::size_t i = 0; i < cand.size(); ++i)
        for (std::size_t j = 0; j < cand.size(); ++j)
          m[i][j] = Int(s_full[cand[i]][cand[j]]);
      Int det = integer_determinant(m);
      if (det == 1 || det == -1) chosen = cand;
    }
    if (chosen.empty())
      throw ConvergenceError("no chain-loop subset gives a unimodular intersection form");
  }

  std::vector<std::vector<long>> s0(2 * g, std::vector<long>(2 * g));
  for (int i = 0; i < 2 * g; ++i)
    for (int j = 0; j < 2 * g; ++j) s0[i][j] = s_full[chosen[i]][chosen[j]];

  std::vector<std::vector<long>> u = symplectic_basis(s0);
  std::vector<std::vector<long>> check = apply_basis(u, s0);
  for (int i = 0; i < 2 * g; ++i)
    for (int j = 0; j < 2 * g; ++j) {
      long want = 0;
      if (j == i + g) want = 1;
      if (j + g == i) want = -1;
      if (check[i][j] != want)
        throw ValidationError("symplectic reduction of the intersection form failed");
    }

  // Period matrix: row k of U expresses the k-th symplectic cycle in the
  // chosen loops; A_{ik} = integral of x^{i-1} dx / y over a_k, same for B.
  Eigen::MatrixXcd a_mat(g, g), b_mat(g, g);
  for (int k = 0; k < 2 * g; ++k) {
    Eigen::VectorXcd period = Eigen::VectorXcd::Zero(g);
    for (int l = 0; l < 2 * g; ++l)
      if (u[k][l] != 0) period += static_cast<double>(u[k][l]) * loops[chosen[l]].periods;
    if (k < g)
      a_mat.col(k) = period;
    else
      b_mat.col(k - g) = period;
  }

  Eigen::MatrixXcd tau = a_mat.fullPivLu().solve(b_mat);
  double asym = (tau - tau.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-6) throw ConvergenceError("computed period matrix is not symmetric");
  tau = (0.5 * (tau + tau.transpose())).eval();

  Eigen::MatrixXd im = tau.imag();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (im + im.transpose()).eval());
  if (es.eigenvalues().minCoeff() > 0) {
    c.pm_ = PeriodMatrix::create(tau, 1e-6);
    c.a_inverse_ = a_mat.fullPivLu().inverse();
    c.period_asymmetry_ = asym;
  } else if (es.eigenvalues().maxCoeff() < 0) {
    // The crossing-sign convention fixed the opposite orientation; swapping
    // the roles of the a and b cycles is symplectic for that orientation and
    // replaces tau by its inverse, whose imaginary part is positive definite.
    Eigen::MatrixXcd tau2 = b_mat.fullPivLu().solve(a_mat);
    double asym2 = (tau2 - tau2.transpose()).cwiseAbs().maxCoeff();
    if (asym2 > 1e-6) throw ConvergenceError("computed period matrix is not symmetric");
    tau2 = (0.5 * (tau2 + tau2.transpose())).eval();
    c.pm_ = PeriodMatrix::create(tau2, 1e-6);
    c.a_inverse_ = b_mat.fullPivLu().inverse();
    c.period_asymmetry_ = asym2;
  } else {
    throw ConvergenceError("imaginary part of the period matrix is indefinite");
  }

  // Abel-Jacobi images of branch points must be half-periods. This exercises
  // the whole integration stack, so check it before trusting anything else.
  std::vector<CVec> finite_images;
  for (std::size_t i = 0; i < nb; ++i) finite_images.push_back(c.abel_jacobi(branch[i], 0));
  CVec inf_image;
  if (odd_model) inf_image = c.abel_jacobi_infinity();
  for (std::size_t i = 0; i < nb; ++i) {
    ReducedPoint rp = lattice_reduce(2.0 * finite_images[i], c.pm_);
    if (rp.z_red.cwiseAbs().maxCoeff() > 1e-5)
      throw ConvergenceError("doubled branch image is not a lattice point");
  }
  if (odd_model) {
    ReducedPoint rp = lattice_reduce(2.0 * inf_image, c.pm_);
    if (rp.z_red.cwiseAbs().maxCoeff() > 1e-5)
      throw ConvergenceError("doubled image of infinity is not a lattice point");
  }
  if (g >= 2) {
    c.weierstrass_images_ = finite_images;
    if (odd_model) c.weierstrass_images_.push_back(inf_image);
  }

  // Calibrate the theta shift: among the 4^g half-periods exactly one sends
  // classes of effective divisors of degree g-1 onto the zero set of theta.
  // In genus 1 that divisor is empty, so minimize theta at the shift itself;
  // in genus 2 minimize the worst value over the single branch images.
  const Eigen::MatrixXcd& tau_m = c.pm_.tau();
  std::vector<CVec> test_points = finite_images;
  if (odd_model) test_points.push_back(inf_image);
  double best_score = 1e300;
  CVec best_h;
  for (int mask = 0; mask < (1 << (2 * g)); ++mask) {
    CVec mm(g), nn(g);
    for (int i = 0; i < g; ++i) {
      mm[i] = (mask >> i) & 1 ? 0.5 : 0.0;
      nn[i] = (mask >> (g + i)) & 1 ? 0.5 : 0.0;
    }
    CVec h = mm + tau_m * nn;
    double score;
    if (g == 1) {
      score = theta_norm(h, c.pm_, 1e-12);
    } else {
      score = 0.0;
      for (const auto& up : test_points)
        score = std::max(score, theta_norm(up + h, c.pm_, 1e-12));
    }
    if (score < best_score) {
      best_score = score;
      best_h = h;
    }
  }
  if (best_score > 1e-6)
    throw ConvergenceError("no half-period shift puts the branch images on the theta divisor");
  c.kappa_ = best_h;
  return c;
}

CVec CurveAnalytic::abel_jacobi(Cplx x, int sheet) const {
  if (torus_mode_)
    throw ValidationError("point integration requires a branch-point model");
  int g = pm_.genus();
  Cplx base = branch_[0];
  double scale = 0.0, min_gap = 1e300;
  for (std::size_t i = 0; i < branch_.size(); ++i)
    for (std::size_t j = i + 1; j < branch_.size(); ++j) {
      double d = std::abs(branch_[i] - branch_[j]);
      scale = std::max(scale, d);
      min_gap = std::min(min_gap, d);
    }
  double clearance = 0.08 * min_gap;

  if (std::abs(x - base) < 1e-12) return CVec::Zero(g);

  int target_branch = -1;
  for (std::size_t i = 0; i < branch_.size(); ++i)
    if (std::abs(x - branch_[i]) < 1e-12) {
      x = branch_[i];
      target_branch = static_cast<int>(i);
    }
  Cplx dest = x;

  // Route base -> waypoint -> dest, both legs clear of every branch point
  // that is not an endpoint of that leg.
  auto leg_clear = [&](Cplx p, Cplx q) {
    for (Cplx b : branch_) {
      if (std::abs(b - p) < 1e-9 || std::abs(b - q) < 1e-9) continue;
      if (segment_distance(p, q, b) < clearance) return false;
    }
    return true;
  };
  Cplx mid = 0.5 * (base + dest);
  // Lift perpendicular to the chord; a fixed vertical lift would keep every
  // candidate collinear when the branch points line up vertically.
  Cplx perp = (dest - base) / std::abs(dest - base) * Cplx(0.0, 1.0);
  Cplx waypoint;
  bool found = false;
  for (double lift : {0.0, 1.0, -1.0, 2.0, -2.0, 3.0, -3.0}) {
    Cplx w = mid + perp * (lift * 0.7 * scale);
    bool w_clear = true;
    for (Cplx b : branch_)
      if (std::abs(w - b) < clearance) w_clear = false;
    if (!w_clear) continue;
    if (std::abs(w - base) < 1e-9 || std::abs(w - dest) < 1e-9) continue;
    if (leg_clear(base, w) && leg_clear(w, dest)) {
      waypoint = w;
      found = true;
      break;
    }
  }
  if (!found) throw ConvergenceError("no clear integration route to the requested point");

  LegResult leg1 = integrate_branch_leg(f_, g, base, waypoint, tol_);
  Eigen::VectorXcd raw = leg1.integrals;
  Cplx y_at_w = leg1.y_end;

  Cplx y_end = 0.0;
  if (target_branch >= 0) {
    // Arrive at a branch point by integrating its own branch leg backwards.
    // Its sqrt sign is free too: match the sheets at the shared waypoint.
    LegResult leg2 = integrate_branch_leg(f_, g, dest, waypoint, tol_);
    Eigen::VectorXcd seg = leg2.integrals;
    Cplx y2_at_w = leg2.y_end;
    if (std::abs(y2_at_w - y_at_w) > std::abs(y2_at_w + y_at_w)) seg = -seg;
    raw -= seg;
  } else {
    LegResult leg2 = integrate_plain_leg(f_, g, waypoint, y_at_w, dest, tol_);
    raw += leg2.integrals;
    y_end = leg2.y_end;
  }

  CVec image = a_inverse_ * raw;
  if (target_branch >= 0) return image;

  Cplx y_req = std::sqrt(poly_eval(f_, dest));
  if (sheet != 0) y_req = -y_req;
  if (std::abs(y_end - y_req) > std::abs(y_end + y_req)) image = -image;
  return image;
}

CVec CurveAnalytic::abel_jacobi_infinity() const {
  if (torus_mode_)
    throw ValidationError("point integration requires a branch-point model");
  if (branch_.size() % 2 == 0)
    throw ValidationError("infinity is a branch point only on odd-degree models");
  int g = pm_.genus();
  Cplx base = branch_[0];
  Cplx centroid = 0.0;
  double radius = 0.0, max_abs = 0.0, min_gap = 1e300;
  for (Cplx b : branch_) centroid += b;
  centroid /= static_cast<double>(branch_.size());
  for (Cplx b : branch_) {
    radius = std::max(radius, std::abs(b - centroid));
    max_abs = std::max(max_abs, std::abs(b));
  }
  for (std::size_t i = 0; i < branch_.size(); ++i)
    for (std::size_t j = i + 1; j < branch_.size(); ++j)
      min_gap = std::min(min_gap, std::abs(branch_[i] - branch_[j]));
  double clearance = 0.08 * min_gap;

  // Waypoint with |x0| strictly above every |branch point|, so the ray
  // x = x0 / s^2 never meets a root of f, and with a clear first leg.
  double height = 2.0 * max_abs + 3.0 * radius + 1.0;
  Cplx waypoint;
  bool found = false;
  for (double shift : {0.0, 1.0, -1.0, 2.0, -2.0}) {
    Cplx w = centroid + Cplx(shift * radius, height);
    if (std::abs(w) <= max_abs * 1.2 + 1e-9) continue;
    bool ok = true;
    for (Cplx b : branch_) {
      if (std::abs(b - base) < 1e-9) continue;
      if (segment_distance(base, w, b) < clearance) ok = false;
    }
    if (ok) {
      waypoint = w;
      found = true;
      break;
    }
  }
  if (!found) throw ConvergenceError("no clear integration route toward infinity");

  LegResult leg1 = integrate_branch_leg(f_, g, base, waypoint, tol_);
  LegResult tail = integrate_infinity_leg(f_, g, waypoint, leg1.y_end, tol_);
  return a_inverse_ * (leg1.integrals + tail.integrals);
}

CVec CurveAnalytic::sample_point(std::mt19937_64& rng) const {
  auto unit = [&rng]() { return (rng() >> 11) * 0x1.0p-53; };
  int g = pm_.genus();
  if (torus_mode_) {
    CVec xi(g), zeta(g);
    for (int i = 0; i < g; ++i) {
      xi[i] = unit();
      zeta[i] = unit();
    }
    return xi + pm_.tau() * zeta;
  }
  double re_min = 1e300, re_max = -1e300, spread = 0.0;
  for (Cplx b : branch_) {
    re_min = std::min(re_min, b.real());
    re_max = std::max(re_max, b.real());
  }
  for (std::size_t i = 0; i < branch_.size(); ++i)
    for (std::size_t j = i + 1; j < branch_.size(); ++j)
      spread = std::max(spread, std::abs(branch_[i] - branch_[j]));
  double re = re_min - 1.0 + unit() * (re_max - re_min + 2.0);
  double im_mag = (0.25 + 0.75 * unit()) * 0.8 * spread;
  double sign = unit() < 0.5 ? 1.0 : -1.0;
  int sheet = unit() < 0.5 ? 0 : 1;
  return abel_jacobi(Cplx(re, sign * im_mag), sheet);
}

double t_invariant(const CurveAnalytic& curve, std::uint64_t seed, double tol) {
  const PeriodMatrix& pm = curve.period_matrix();
  int g = pm.genus();
  const CVec& kappa = curve.riemann_constant();
  const std::vector<CVec>& wpts = curve.weierstrass_images();
  double theta_tol = std::min(tol, 1e-10) * 1e-2;
  const double reject_floor = 1e-8;

  std::mt19937_64 rng(seed);
  for (int attempt = 0; attempt < 50; ++attempt) {
    std::vector<CVec> p(g);
    for (int k = 0; k < g; ++k) p[k] = curve.sample_point(rng);
    CVec q = curve.sample_point(rng);

    bool degenerate = false;
    auto log_theta = [&](const CVec& z) {
      double v = theta_norm(z, pm, theta_tol);
      if (v < reject_floor) degenerate = true;
      return degenerate ? 0.0 : std::log(v);
    };

    CVec sum_p = CVec::Zero(g);
    for (int k = 0; k < g; ++k) sum_p += p[k];

    double log_t = 0.0;

    // leading factor: theta(P_1 + .. + P_g - Q) divided by the geometric
    // mean of theta(g P_k - Q), all to the power 2g - 2
    double lead = log_theta(sum_p - q + kappa);
    for (int k = 0; k < g && !degenerate; ++k)
      lead -= log_theta(static_cast<double>(g) * p[k] - q + kappa) / g;
    if (degenerate) continue;
    log_t += (2.0 * g - 2.0) * lead;

    // pair factor over ordered pairs k != l
    for (int k = 0; k < g && !degenerate; ++k)
      for (int l = 0; l < g && !degenerate; ++l) {
        if (k == l) continue;
        log_t += log_theta(static_cast<double>(g) * p[k] - p[l] + kappa) / g;
      }
    if (degenerate) continue;

    // Jacobian factor at w_k = sum_{l != k} u(P_l) + kappa, points of the
    // theta divisor where the norm is well defined on classes
    std::vector<CVec> w(g);
    for (int k = 0; k < g; ++k) {
      CVec acc = kappa;
      for (int l = 0; l < g; ++l)
        if (l != k) acc += p[l];
      w[k] = acc;
    }
    double jn = j_norm(w, pm, theta_tol);
    if (jn < reject_floor) continue;
    log_t -= 2.0 * std::log(jn);

    // Weierstrass-point factor, empty in genus 1
    if (!wpts.empty()) {
      double ex = (g - 1.0) / (static_cast<double>(g) * g * g * g);
      for (const auto& r : wpts)
        for (int k = 0; k < g && !degenerate; ++k)
          log_t += ex * log_theta(static_cast<double>(g) * p[k] - r + kappa);
      if (degenerate) continue;
    }

    return std::exp(log_t);
  }
  throw DegenerateSampleError("all sampled divisors were too close to the theta divisor");
}

}  // namespace wsinv
