#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ca/distribution.hpp"

namespace ca {

enum class Var { Z, Yc, Yo, Yp };

inline const char* var_name(Var v) {
  switch (v) {
    case Var::Z: return "Z";
    case Var::Yc: return "Yc";
    case Var::Yo: return "Yo";
    case Var::Yp: return "Yp";
  }
  return "?";
}

using Assignment = std::pair<Var, Label>;

// Exact joint probability table over (Z, Yc, Yo, Yp). Z is binary {0,1};
// every audit conditions on it, so both group masses must be positive.
// Cells are dense in canonical label order; missing assignments are zeros.
template <class S>
class JointDistribution {
 public:
  JointDistribution() = default;

  JointDistribution(Support yc, Support yo, Support yp, std::vector<S> cells)
      : yc_(std::move(yc)), yo_(std::move(yo)), yp_(std::move(yp)), cells_(std::move(cells)) {
    require(cells_.size() == 2 * yc_.size() * yo_.size() * yp_.size(), Errc::invalid_argument,
            "cell vector does not match support sizes");
    S mass(0);
    for (auto& p : cells_) {
      if (p < S(0)) {
        require(-p <= num_traits<S>::mass_tol(), Errc::negative_probability,
                "negative cell probability " + num_traits<S>::str(p));
        p = S(0);
      }
      mass += p;
    }
    require(abs_val<S>(mass - S(1)) <= num_traits<S>::mass_tol(), Errc::mass_not_one,
            "table mass is " + num_traits<S>::str(mass));
    for (int z = 0; z < 2; ++z) {
      require(group_mass(z) > S(0), Errc::empty_group,
              std::string("Pr[Z=") + std::to_string(z) + "] = 0");
    }
  }

  // Builds the dense table cell by cell from a generator over label indices.
  static JointDistribution from_cells(
      Support yc, Support yo, Support yp,
      const std::function<S(int z, std::size_t ic, std::size_t io, std::size_t ip)>& cell) {
    std::vector<S> cells;
    cells.reserve(2 * yc.size() * yo.size() * yp.size());
    for (int z = 0; z < 2; ++z)
      for (std::size_t c = 0; c < yc.size(); ++c)
        for (std::size_t o = 0; o < yo.size(); ++o)
          for (std::size_t p = 0; p < yp.size(); ++p) cells.push_back(cell(z, c, o, p));
    return JointDistribution(std::move(yc), std::move(yo), std::move(yp), std::move(cells));
  }

  static const Support& z_support() {
    static const Support z = Support::binary01();
    return z;
  }
  const Support& support(Var v) const {
    switch (v) {
      case Var::Z: return z_support();
      case Var::Yc: return yc_;
      case Var::Yo: return yo_;
      case Var::Yp: return yp_;
    }
    fail(Errc::invalid_argument, "bad variable");
  }

  bool has_construct() const { return !yc_.is_placeholder(); }

  const std::vector<S>& cells() const { return cells_; }

  std::size_t index(int z, std::size_t ic, std::size_t io, std::size_t ip) const {
    return ((static_cast<std::size_t>(z) * yc_.size() + ic) * yo_.size() + io) * yp_.size() + ip;
  }

  const S& cell(int z, std::size_t ic, std::size_t io, std::size_t ip) const {
    return cells_[index(z, ic, io, ip)];
  }

  S group_mass(int z) const {
    S acc(0);
    std::size_t block = yc_.size() * yo_.size() * yp_.size();
    for (std::size_t i = 0; i < block; ++i) acc += cells_[static_cast<std::size_t>(z) * block + i];
    return acc;
  }

  Distribution<S> marginal(Var v) const {
    const Support& sup = support(v);
    std::vector<S> acc(sup.size(), S(0));
    for_each_cell([&](int z, std::size_t c, std::size_t o, std::size_t p, const S& mass) {
      acc[pick(v, z, c, o, p)] += mass;
    });
    return Distribution<S>(sup, std::move(acc));
  }

  // Renormalized law of `target` given the (possibly empty) assignment.
  Distribution<S> condition(Var target, const std::vector<Assignment>& given) const {
    std::array<std::optional<std::size_t>, 4> fixed;  // by var index
    for (const auto& [v, l] : given) {
      require(v != target, Errc::invalid_argument, "conditioning on the target variable");
      fixed[static_cast<int>(v)] = support(v).require_index(l);
    }
    const Support& sup = support(target);
    std::vector<S> acc(sup.size(), S(0));
    S total(0);
    for_each_cell([&](int z, std::size_t c, std::size_t o, std::size_t p, const S& mass) {
      const std::size_t idx[4] = {static_cast<std::size_t>(z), c, o, p};
      for (int v = 0; v < 4; ++v)
        if (fixed[v] && *fixed[v] != idx[v]) return;
      acc[pick(target, z, c, o, p)] += mass;
      total += mass;
    });
    require(total > S(0), Errc::zero_mass_condition, "conditioning event has probability 0");
    for (auto& a : acc) a /= total;
    return Distribution<S>(sup, std::move(acc));
  }

  Distribution<S> given_z(Var target, int z) const {
    return condition(target, {{Var::Z, Label::number(z)}});
  }

  S prob(const std::vector<Assignment>& event) const {
    std::array<std::optional<std::size_t>, 4> fixed;
    for (const auto& [v, l] : event) fixed[static_cast<int>(v)] = support(v).require_index(l);
    S total(0);
    for_each_cell([&](int z, std::size_t c, std::size_t o, std::size_t p, const S& mass) {
      const std::size_t idx[4] = {static_cast<std::size_t>(z), c, o, p};
      for (int v = 0; v < 4; ++v)
        if (fixed[v] && *fixed[v] != idx[v]) return;
      total += mass;
    });
    return total;
  }

  // Pr[Yc = Yp | Z = z]; labels compare across the two supports.
  S agreement_given_z(int z) const {
    S hit(0);
    for_each_cell([&](int zz, std::size_t c, std::size_t o, std::size_t p, const S& mass) {
      (void)o;
      if (zz == z && yc_.at(c) == yp_.at(p)) hit += mass;
    });
    return hit / group_mass(z);
  }

  template <class Fn>
  void for_each_cell(Fn&& fn) const {
    std::size_t i = 0;
    for (int z = 0; z < 2; ++z)
      for (std::size_t c = 0; c < yc_.size(); ++c)
        for (std::size_t o = 0; o < yo_.size(); ++o)
          for (std::size_t p = 0; p < yp_.size(); ++p) fn(z, c, o, p, cells_[i++]);
  }

  bool operator==(const JointDistribution& o) const {
    return yc_ == o.yc_ && yo_ == o.yo_ && yp_ == o.yp_ && cells_ == o.cells_;
  }

 private:
  std::size_t pick(Var v, int z, std::size_t c, std::size_t o, std::size_t p) const {
    switch (v) {
      case Var::Z: return static_cast<std::size_t>(z);
      case Var::Yc: return c;
      case Var::Yo: return o;
      case Var::Yp: return p;
    }
    return 0;
  }

  Support yc_, yo_, yp_;
  std::vector<S> cells_;
};

// One full assignment with its probability, the make_joint input format.
template <class S>
struct CellSpec {
  int z = 0;
  Label yc, yo, yp;
  S p{0};
};

template <class S>
JointDistribution<S> make_joint(const Support& yc, const Support& yo, const Support& yp,
                                const std::vector<CellSpec<S>>& table) {
  std::vector<S> cells(2 * yc.size() * yo.size() * yp.size(), S(0));
  for (const auto& spec : table) {
    require(spec.z == 0 || spec.z == 1, Errc::unknown_label,
            "Z must be 0 or 1, got " + std::to_string(spec.z));
    require(!(spec.p < S(0)), Errc::negative_probability,
            "negative probability " + num_traits<S>::str(spec.p));
    std::size_t ic = yc.require_index(spec.yc);
    std::size_t io = yo.require_index(spec.yo);
    std::size_t ip = yp.require_index(spec.yp);
    std::size_t idx = ((static_cast<std::size_t>(spec.z) * yc.size() + ic) * yo.size() + io) *
                          yp.size() + ip;
    cells[idx] += spec.p;
  }
  return JointDistribution<S>(yc, yo, yp, std::move(cells));
}

// Stochastic classifier: a law of Yp for every (Yo, Z) input pair.
template <class S>
class ModelKernel {
 public:
  ModelKernel(Support input, Support output)
      : input_(std::move(input)), output_(std::move(output)) {
    rows_[0].resize(input_.size());
    rows_[1].resize(input_.size());
  }

  const Support& input_support() const { return input_; }
  const Support& output_support() const { return output_; }

  void set_row(int z, const Label& yo, Distribution<S> row) {
    require(z == 0 || z == 1, Errc::unknown_label, "Z must be 0 or 1");
    require(row.support() == output_, Errc::invalid_argument,
            "kernel row support does not match output support");
    rows_[z][input_.require_index(yo)] = std::move(row);
  }

  // Same law for both groups (rows depend on Yo only).
  void set_shared_row(const Label& yo, const Distribution<S>& row) {
    set_row(0, yo, row);
    set_row(1, yo, row);
  }

  const std::optional<Distribution<S>>& row(int z, std::size_t yo_index) const {
    return rows_[z][yo_index];
  }

  static ModelKernel identity(const Support& y) {
    ModelKernel k(y, y);
    for (const auto& l : y.labels()) k.set_shared_row(l, Distribution<S>::point_mass(y, l));
    return k;
  }

  static ModelKernel constant(const Support& input, Distribution<S> out) {
    ModelKernel k(input, out.support());
    for (const auto& l : input.labels()) k.set_shared_row(l, out);
    return k;
  }

 private:
  Support input_, output_;
  std::array<std::vector<std::optional<Distribution<S>>>, 2> rows_;
};

// Product law: keeps the (Yc, Yo, Z) marginal of `base` and draws Yp from the
// kernel row for (Yo, Z). The base's own Yp dimension is marginalized away.
template <class S>
JointDistribution<S> apply_model(const JointDistribution<S>& base, const ModelKernel<S>& kernel) {
  require(kernel.input_support() == base.support(Var::Yo), Errc::invalid_argument,
          "kernel input support differs from base Yo support");
  const Support& yc = base.support(Var::Yc);
  const Support& yo = base.support(Var::Yo);
  const Support& yp = kernel.output_support();

  // base mass with Yp summed out
  std::vector<S> base3(2 * yc.size() * yo.size(), S(0));
  base.for_each_cell([&](int z, std::size_t c, std::size_t o, std::size_t p, const S& mass) {
    (void)p;
    base3[(static_cast<std::size_t>(z) * yc.size() + c) * yo.size() + o] += mass;
  });

  std::vector<S> cells(2 * yc.size() * yo.size() * yp.size(), S(0));
  std::size_t out = 0;
  for (int z = 0; z < 2; ++z)
    for (std::size_t c = 0; c < yc.size(); ++c)
      for (std::size_t o = 0; o < yo.size(); ++o) {
        const S& m = base3[(static_cast<std::size_t>(z) * yc.size() + c) * yo.size() + o];
        if (m > S(0)) {
          const auto& row = kernel.row(z, o);
          require(row.has_value(), Errc::missing_kernel_row,
                  "no kernel row for (Yo=" + yo.at(o).str() + ", Z=" + std::to_string(z) + ")");
          for (std::size_t p = 0; p < yp.size(); ++p) cells[out + p] = m * (*row)[p];
        }
        out += yp.size();
      }
  return JointDistribution<S>(yc, yo, yp, std::move(cells));
}

// One dataset row. y_construct is optional; presence must be uniform.
struct SampleRecord {
  int z = 0;
  Label y_obs, y_pred;
  std::optional<Label> y_construct;
};

// Plug-in maximum-likelihood frequency table.
template <class S>
JointDistribution<S> from_samples(const std::vector<SampleRecord>& records, const Support& yo,
                                  const Support& yp, const std::optional<Support>& yc) {
  require(!records.empty(), Errc::invalid_argument, "no records");
  bool with_construct = records.front().y_construct.has_value();
  require(with_construct == yc.has_value(), Errc::mixed_construct_presence,
          with_construct ? "records carry y_construct but no Yc support was declared"
                         : "Yc support declared but records carry no y_construct");
  Support yc_sup = with_construct ? *yc : Support::construct_placeholder();

  std::vector<long long> counts(2 * yc_sup.size() * yo.size() * yp.size(), 0);
  long long per_z[2] = {0, 0};
  for (const auto& r : records) {
    require(r.z == 0 || r.z == 1, Errc::unknown_label, "z must be 0 or 1");
    require(r.y_construct.has_value() == with_construct, Errc::mixed_construct_presence,
            "some records carry y_construct and some do not");
    std::size_t ic = with_construct ? yc_sup.require_index(*r.y_construct) : 0;
    std::size_t io = yo.require_index(r.y_obs);
    std::size_t ip = yp.require_index(r.y_pred);
    std::size_t idx =
        ((static_cast<std::size_t>(r.z) * yc_sup.size() + ic) * yo.size() + io) * yp.size() + ip;
    counts[idx]++;
    per_z[r.z]++;
  }
  for (int z = 0; z < 2; ++z)
    require(per_z[z] > 0, Errc::empty_group,
            "no records with z=" + std::to_string(z));

  auto n = static_cast<long long>(records.size());
  std::vector<S> cells(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i)
    cells[i] = num_traits<S>::from_ratio(counts[i], n);
  return JointDistribution<S>(yc_sup, yo, yp, std::move(cells));
}

}  // namespace ca
