#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "ca/distribution.hpp"
#include "ca/metric.hpp"

namespace ca {

// An optimal transport plan together with the dual potentials certifying it:
// u_i + v_j <= d(i,j) everywhere, with equality on every positive move, and
// cost = sum(mass * d) = <u,p> + <v,q>.
template <class S>
struct TransportPlan {
  Support support;
  std::vector<std::tuple<std::size_t, std::size_t, S>> moves;  // (from, to, mass), mass > 0
  S cost{0};
  std::vector<S> dual_source, dual_target;

  S mass_between(std::size_t i, std::size_t j) const {
    S acc(0);
    for (const auto& [a, b, m] : moves)
      if (a == i && b == j) acc += m;
    return acc;
  }
};

namespace detail {

template <class S>
Distribution<S> embed_on(const Distribution<S>& p, const Support& target) {
  if (p.support() == target) return p;
  std::vector<S> probs(target.size(), S(0));
  for (std::size_t i = 0; i < p.size(); ++i) {
    auto idx = target.index_of(p.support().at(i));
    if (!idx) {
      require(!(p[i] > S(0)), Errc::metric_mismatch,
              "label '" + p.support().at(i).str() + "' carries mass but is outside the metric support");
      continue;
    }
    probs[*idx] = p[i];
  }
  return Distribution<S>(target, std::move(probs));
}

// Solver state for the primal transportation simplex. Bland's rule (first
// negative reduced cost enters, first tied minimum leaves) prevents cycling
// through degenerate bases, so rational mode terminates unconditionally.
template <class S>
class TransportSimplex {
 public:
  TransportSimplex(const Distribution<S>& p, const Distribution<S>& q, const MetricSupport& ms)
      : n_(ms.support().size()), ms_(ms), x_(n_ * n_, S(0)), basic_(n_ * n_, 0) {
    supply_ = p.probs();
    demand_ = q.probs();
    cost_.reserve(n_ * n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) cost_.push_back(ms.template distance<S>(i, j));
  }

  TransportPlan<S> solve() {
    northwest_corner();
    const S enter_tol = num_traits<S>::exact ? S(0) : S(1e-13);
    for (long iter = 0; iter < kMaxIterations; ++iter) {
      compute_duals();
      std::size_t enter = n_ * n_;
      for (std::size_t c = 0; c < n_ * n_; ++c) {
        if (basic_[c]) continue;
        S reduced = cost_[c] - u_[c / n_] - v_[c % n_];
        if (reduced < -enter_tol) {
          enter = c;
          break;  // Bland: first improving cell
        }
      }
      if (enter == n_ * n_) return extract();
      pivot(enter);
    }
    throw std::logic_error("transport simplex failed to converge");
  }

 private:
  static constexpr long kMaxIterations = 200000;

  void northwest_corner() {
    std::vector<S> ra = supply_, rb = demand_;
    std::size_t i = 0, j = 0;
    while (true) {
      S t = min_val(ra[i], rb[j]);
      if (i == n_ - 1 && j == n_ - 1) t = ra[i];  // absorb float residue
      x_[i * n_ + j] = t;
      basic_[i * n_ + j] = 1;
      ra[i] -= t;
      rb[j] -= t;
      if (i == n_ - 1 && j == n_ - 1) break;
      if (j == n_ - 1) {
        ++i;
      } else if (i < n_ - 1 && !(ra[i] > S(0))) {
        ++i;
      } else {
        ++j;
      }
    }
  }

  void compute_duals() {
    u_.assign(n_, S(0));
    v_.assign(n_, S(0));
    std::vector<char> known(2 * n_, 0);
    known[0] = 1;  // anchor u_0 = 0
    std::deque<std::size_t> queue{0};
    std::vector<std::vector<std::size_t>> row_cells(n_), col_cells(n_);
    for (std::size_t c = 0; c < n_ * n_; ++c) {
      if (!basic_[c]) continue;
      row_cells[c / n_].push_back(c);
      col_cells[c % n_].push_back(c);
    }
    while (!queue.empty()) {
      std::size_t node = queue.front();
      queue.pop_front();
      if (node < n_) {
        for (std::size_t c : row_cells[node]) {
          std::size_t col = n_ + c % n_;
          if (!known[col]) {
            v_[c % n_] = cost_[c] - u_[node];
            known[col] = 1;
            queue.push_back(col);
          }
        }
      } else {
        std::size_t j = node - n_;
        for (std::size_t c : col_cells[j]) {
          std::size_t row = c / n_;
          if (!known[row]) {
            u_[row] = cost_[c] - v_[j];
            known[row] = 1;
            queue.push_back(row);
          }
        }
      }
    }
  }

  // Unique alternating cycle created by the entering cell: walk the basis
  // tree from the entering row to the entering column.
  void pivot(std::size_t enter) {
    std::size_t src = enter / n_, dst = n_ + enter % n_;
    std::vector<std::size_t> parent_edge(2 * n_, n_ * n_);
    std::vector<std::size_t> parent(2 * n_, 2 * n_);
    std::vector<char> seen(2 * n_, 0);
    seen[src] = 1;
    std::deque<std::size_t> queue{src};
    while (!queue.empty() && !seen[dst]) {
      std::size_t node = queue.front();
      queue.pop_front();
      for (std::size_t c = 0; c < n_ * n_; ++c) {
        if (!basic_[c]) continue;
        std::size_t a = c / n_, b = n_ + c % n_;
        std::size_t other;
        if (a == node)
          other = b;
        else if (b == node)
          other = a;
        else
          continue;
        if (seen[other]) continue;
        seen[other] = 1;
        parent[other] = node;
        parent_edge[other] = c;
        queue.push_back(other);
      }
    }
    if (!seen[dst]) throw std::logic_error("transport basis is not connected");

    std::vector<std::size_t> path;  // cells from entering row to entering col
    for (std::size_t node = dst; node != src; node = parent[node]) path.push_back(parent_edge[node]);
    std::reverse(path.begin(), path.end());

    // entering gets +theta; path cells alternate -,+,-,... starting with -
    S theta(0);
    std::size_t leave = n_ * n_;
    bool have = false;
    for (std::size_t k = 0; k < path.size(); k += 2) {
      const S& m = x_[path[k]];
      if (!have || m < theta) {
        theta = m;
        leave = path[k];
        have = true;
      } else if (m == theta && path[k] < leave) {
        leave = path[k];  // Bland tie-break
      }
    }
    x_[enter] = theta;
    for (std::size_t k = 0; k < path.size(); ++k) {
      if (k % 2 == 0)
        x_[path[k]] -= theta;
      else
        x_[path[k]] += theta;
    }
    basic_[enter] = 1;
    basic_[leave] = 0;
    x_[leave] = S(0);
  }

  TransportPlan<S> extract() {
    TransportPlan<S> plan;
    plan.support = ms_.support();
    plan.dual_source = u_;
    plan.dual_target = v_;
    for (std::size_t c = 0; c < n_ * n_; ++c) {
      if (x_[c] > S(0)) {
        plan.moves.emplace_back(c / n_, c % n_, x_[c]);
        plan.cost += x_[c] * cost_[c];
      }
    }
    return plan;
  }

  std::size_t n_;
  const MetricSupport& ms_;
  std::vector<S> supply_, demand_, cost_, x_, u_, v_;
  std::vector<char> basic_;
};

}  // namespace detail

// Throws if the plan is not a certified optimum for (p, q, ms).
template <class S>
void verify_transport_plan(const TransportPlan<S>& plan, const Distribution<S>& p,
                           const Distribution<S>& q, const MetricSupport& ms) {
  const std::size_t n = ms.support().size();
  const S tol = num_traits<S>::exact ? S(0) : S(1e-9);
  std::vector<S> row(n, S(0)), col(n, S(0));
  S cost(0);
  for (const auto& [i, j, m] : plan.moves) {
    if (m < S(0)) throw std::logic_error("transport plan has negative mass");
    row[i] += m;
    col[j] += m;
    cost += m * ms.template distance<S>(i, j);
  }
  auto pe = detail::embed_on(p, ms.support());
  auto qe = detail::embed_on(q, ms.support());
  for (std::size_t i = 0; i < n; ++i) {
    if (abs_val<S>(row[i] - pe[i]) > tol + num_traits<S>::mass_tol())
      throw std::logic_error("transport plan row sums do not match the source");
    if (abs_val<S>(col[i] - qe[i]) > tol + num_traits<S>::mass_tol())
      throw std::logic_error("transport plan column sums do not match the target");
  }
  if (abs_val<S>(cost - plan.cost) > tol) throw std::logic_error("transport plan cost mismatch");
  if (plan.dual_source.size() != n || plan.dual_target.size() != n)
    throw std::logic_error("transport plan lacks dual potentials");
  S dual_value(0);
  for (std::size_t i = 0; i < n; ++i)
    dual_value += plan.dual_source[i] * pe[i] + plan.dual_target[i] * qe[i];
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      S slack = ms.template distance<S>(i, j) - plan.dual_source[i] - plan.dual_target[j];
      if (slack < -tol) throw std::logic_error("dual potentials are infeasible");
    }
  for (const auto& [i, j, m] : plan.moves) {
    if (!(m > tol)) continue;
    S slack = ms.template distance<S>(i, j) - plan.dual_source[i] - plan.dual_target[j];
    if (abs_val<S>(slack) > tol) throw std::logic_error("complementary slackness violated");
  }
  if (abs_val<S>(dual_value - plan.cost) > tol)
    throw std::logic_error("dual objective does not match plan cost");
}

// Exact minimum-cost transport between p and q under the ground metric.
template <class S>
TransportPlan<S> emd(const Distribution<S>& p, const Distribution<S>& q, const MetricSupport& ms) {
  auto pe = detail::embed_on(p, ms.support());
  auto qe = detail::embed_on(q, ms.support());
  TransportPlan<S> plan;
  if (pe.probs() == qe.probs()) {
    // identical laws: the diagonal plan is optimal with zero potentials
    plan.support = ms.support();
    plan.dual_source.assign(ms.support().size(), S(0));
    plan.dual_target.assign(ms.support().size(), S(0));
    for (std::size_t i = 0; i < pe.size(); ++i)
      if (pe[i] > S(0)) plan.moves.emplace_back(i, i, pe[i]);
    plan.cost = S(0);
  } else {
    plan = detail::TransportSimplex<S>(pe, qe, ms).solve();
  }
  verify_transport_plan(plan, pe, qe, ms);
  return plan;
}

// Independent check on the line: EMD under |u-v| equals the L1 distance
// between the CDFs.
template <class S>
S emd_1d_oracle(const Distribution<S>& p, const Distribution<S>& q, const MetricSupport& ms) {
  require(ms.kind() == MetricKind::numeric_absolute, Errc::not_numeric,
          "1-D oracle needs the absolute-difference metric");
  auto pe = detail::embed_on(p, ms.support());
  auto qe = detail::embed_on(q, ms.support());
  const Support& sup = ms.support();  // canonical order is ascending for numerics
  S acc(0), fp(0), fq(0);
  for (std::size_t k = 0; k + 1 < sup.size(); ++k) {
    fp += pe[k];
    fq += qe[k];
    S gap = num_traits<S>::from_rational(sup.at(k + 1).value() - sup.at(k).value());
    acc += abs_val<S>(fp - fq) * gap;
  }
  return acc;
}

namespace detail {

// Elimination schedule for one spanning tree of K_{n,n}: processing cells in
// this order, each one is incident to a leaf of the remaining tree, so its
// mass is forced. Depends only on the tree, so schedules are cached.
struct TreeSchedule {
  // (cell, node): node is the leaf whose remaining balance the cell takes;
  // nodes 0..n-1 are sources, n..2n-1 targets.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> steps;
};

inline const std::vector<TreeSchedule>& spanning_tree_schedules(std::size_t n) {
  static std::mutex mutex;
  static std::map<std::size_t, std::vector<TreeSchedule>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  std::vector<TreeSchedule> out;
  const std::size_t cells = n * n, edges = 2 * n - 1;
  std::vector<std::uint32_t> pick;
  // enumerate all subsets of size 2n-1 of the n*n cells
  std::vector<std::uint32_t> idx(edges);
  for (std::size_t i = 0; i < edges; ++i) idx[i] = static_cast<std::uint32_t>(i);
  while (true) {
    // acyclic + spanning check via union-find over 2n nodes
    std::vector<std::uint32_t> uf(2 * n);
    for (std::size_t i = 0; i < 2 * n; ++i) uf[i] = static_cast<std::uint32_t>(i);
    auto find = [&](std::uint32_t a) {
      while (uf[a] != a) a = uf[a] = uf[uf[a]];
      return a;
    };
    bool tree = true;
    for (std::uint32_t c : idx) {
      std::uint32_t a = find(c / static_cast<std::uint32_t>(n));
      std::uint32_t b = find(static_cast<std::uint32_t>(n) + c % static_cast<std::uint32_t>(n));
      if (a == b) {
        tree = false;
        break;
      }
      uf[a] = b;
    }
    if (tree) {
      // leaf-elimination order
      std::vector<int> degree(2 * n, 0);
      std::vector<std::vector<std::uint32_t>> inc(2 * n);
      for (std::uint32_t c : idx) {
        std::uint32_t a = c / static_cast<std::uint32_t>(n);
        std::uint32_t b = static_cast<std::uint32_t>(n) + c % static_cast<std::uint32_t>(n);
        degree[a]++;
        degree[b]++;
        inc[a].push_back(c);
        inc[b].push_back(c);
      }
      std::vector<char> used(cells, 0);
      TreeSchedule sched;
      for (std::size_t step = 0; step < edges; ++step) {
        for (std::size_t node = 0; node < 2 * n; ++node) {
          if (degree[node] != 1) continue;
          std::uint32_t cell = 0;
          for (std::uint32_t c : inc[node])
            if (!used[c]) cell = c;
          used[cell] = 1;
          std::uint32_t a = cell / static_cast<std::uint32_t>(n);
          std::uint32_t b = static_cast<std::uint32_t>(n) + cell % static_cast<std::uint32_t>(n);
          degree[a]--;
          degree[b]--;
          sched.steps.emplace_back(cell, static_cast<std::uint32_t>(node));
          break;
        }
      }
      out.push_back(std::move(sched));
    }
    // next combination
    std::size_t k = edges;
    while (k > 0 && idx[k - 1] == cells - edges + k - 1) --k;
    if (k == 0) break;
    idx[k - 1]++;
    for (std::size_t i = k; i < edges; ++i) idx[i] = idx[i - 1] + 1;
  }
  return cache.emplace(n, std::move(out)).first->second;
}

}  // namespace detail

// Ground-truth optimum by scanning every vertex of the transport polytope
// (all basic solutions, i.e. spanning trees of the bipartite support graph).
template <class S>
S emd_bruteforce_oracle(const Distribution<S>& p, const Distribution<S>& q,
                        const MetricSupport& ms) {
  const std::size_t n = ms.support().size();
  require(n <= 4, Errc::support_too_large, "brute-force oracle handles supports of size <= 4");
  auto pe = detail::embed_on(p, ms.support());
  auto qe = detail::embed_on(q, ms.support());

  std::vector<S> dist(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) dist[i * n + j] = ms.template distance<S>(i, j);

  const S feas_tol = num_traits<S>::exact ? S(0) : S(1e-12);
  bool any = false;
  S best(0);
  std::vector<S> balance(2 * n);
  for (const auto& sched : detail::spanning_tree_schedules(n)) {
    for (std::size_t i = 0; i < n; ++i) {
      balance[i] = pe[i];
      balance[n + i] = qe[i];
    }
    S cost(0);
    bool feasible = true;
    for (const auto& [cell, node] : sched.steps) {
      S mass = balance[node];
      if (mass < -feas_tol) {
        feasible = false;
        break;
      }
      std::uint32_t a = cell / static_cast<std::uint32_t>(n);
      std::uint32_t b = static_cast<std::uint32_t>(n) + cell % static_cast<std::uint32_t>(n);
      std::uint32_t other = (node == a) ? b : a;
      balance[node] = S(0);
      balance[other] -= mass;
      cost += mass * dist[cell];
    }
    if (feasible && (!any || cost < best)) {
      best = cost;
      any = true;
    }
  }
  require(any, Errc::invalid_argument, "no feasible basic solution (unbalanced inputs?)");
  return best;
}

}  // namespace ca
