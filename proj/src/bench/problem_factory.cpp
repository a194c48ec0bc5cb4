#include "rspider/bench/problem_factory.hpp"

#include "rspider/data_io.hpp"
#include "rspider/errors.hpp"
#include "rspider/kpca.hpp"
#include "rspider/lrmc.hpp"
#include "rspider/quadratic.hpp"

namespace rspider::bench {
namespace {

class CorruptedProblem : public Problem {
 public:
  CorruptedProblem(std::shared_ptr<const Problem> inner, std::size_t index,
                   double relative_error)
      : inner_(std::move(inner)), index_(index), scale_(1.0 + relative_error) {}

  const ManifoldKind& manifold() const override { return inner_->manifold(); }
  std::size_t size() const override { return inner_->size(); }
  std::string name() const override { return inner_->name() + "+corrupt"; }
  double component_loss(std::size_t i, const ManifoldPoint& x) const override {
    return inner_->component_loss(i, x);
  }
  Matrix component_egrad(std::size_t i, const ManifoldPoint& x) const override {
    Matrix g = inner_->component_egrad(i, x);
    if (i == index_) g *= scale_;
    return g;
  }
  std::optional<double> optimum() const override { return inner_->optimum(); }

 private:
  std::shared_ptr<const Problem> inner_;
  std::size_t index_;
  double scale_;
};

std::size_t positive(const RunConfig& c, const char* key, std::int64_t fallback) {
  const std::int64_t v = c.get_int("problem", key, fallback);
  if (v <= 0) throw ConfigError(std::string("problem.") + key + " must be positive");
  return static_cast<std::size_t>(v);
}

RawDataset load_dataset(const RunConfig& c, std::vector<std::string>& notes) {
  const auto path = c.get("problem", "path");
  if (!path) throw ConfigError("problem.path is required when source = file");
  RawDataset data = load_libsvm(*path);
  if (const auto name = c.get("problem", "dataset")) {
    if (const auto info = find_dataset(*name)) {
      if (info->samples != data.n() || info->features != data.d) {
        notes.push_back("dataset " + *name + " expected " +
                        std::to_string(info->samples) + " x " +
                        std::to_string(info->features) + ", file has " +
                        std::to_string(data.n()) + " x " + std::to_string(data.d));
      }
    } else {
      notes.push_back("dataset " + *name + " is not in the registry");
    }
  }
  return data;
}

}  // namespace

BenchProblem make_problem(const RunConfig& c) {
  const std::string kind = c.get_or("problem", "kind", "kpca");
  const std::string source = c.get_or("problem", "source", "synthetic");
  if (source != "synthetic" && source != "file") {
    throw ConfigError("problem.source must be 'synthetic' or 'file'");
  }
  const auto data_seed =
      static_cast<std::uint64_t>(c.get_int("problem", "data_seed", 0));
  const bool want_optimum = c.get_bool("problem", "optimum", true);
  BenchProblem out;

  if (kind == "kpca") {
    const int k = static_cast<int>(positive(c, "k", 5));
    RawDataset data =
        source == "file"
            ? load_dataset(c, out.notes)
            : synth_kpca(positive(c, "n", 1000), positive(c, "d", 50),
                         static_cast<std::size_t>(k),
                         c.get_double("problem", "decay", 0.8), data_seed);
    auto problem = std::make_shared<KPcaProblem>(
        to_sparse_rows(data), k, c.get_bool("problem", "normalize", true));
    if (want_optimum) {
      out.f_star = kpca_optimum(*problem);
      out.f_star_source = "closed-form";
    }
    out.problem = std::move(problem);
  } else if (kind == "lrmc") {
    const std::size_t k = positive(c, "k", 3);
    std::shared_ptr<LrmcProblem> problem;
    if (source == "file") {
      const RawDataset data = load_dataset(c, out.notes);
      std::vector<LrmcColumn> columns;
      for (const auto& row : data.rows) {
        LrmcColumn col;
        col.values.resize(static_cast<Eigen::Index>(row.size()));
        for (std::size_t j = 0; j < row.size(); ++j) {
          col.rows.push_back(row[j].first);
          col.values(static_cast<Eigen::Index>(j)) = row[j].second;
        }
        columns.push_back(std::move(col));
      }
      problem = std::make_shared<LrmcProblem>(static_cast<int>(data.d),
                                              static_cast<int>(k),
                                              std::move(columns));
    } else {
      LrmcInstance inst = synth_lrmc(
          positive(c, "d", 40), positive(c, "n", 60), k,
          c.get_double("problem", "density", 0.3),
          c.get_double("problem", "noise", 0.0), data_seed);
      problem = std::make_shared<LrmcProblem>(std::move(inst.problem));
    }
    if (want_optimum) {
      try {
        out.f_star = lrmc_reference_optimum(*problem).value;
        out.f_star_source = "reference-gd";
      } catch (const ConvergenceError& e) {
        out.f_star = e.best_value();
        out.f_star_source = "reference-gd (not converged)";
        out.notes.push_back(e.what());
      }
    }
    out.problem = std::move(problem);
  } else if (kind == "quadratic") {
    if (source == "file") throw ConfigError("quadratic problems are synthetic only");
    auto problem = std::make_shared<QuadraticProblem>(synth_quadratic(
        positive(c, "n", 100), static_cast<int>(positive(c, "d", 10)),
        c.get_double("problem", "mu", 0.1), data_seed));
    if (want_optimum) {
      out.f_star = problem->optimum();
      if (out.f_star) out.f_star_source = "closed-form";
    }
    out.problem = std::move(problem);
  } else {
    throw ConfigError("problem.kind must be kpca, lrmc or quadratic, got '" +
                      kind + "'");
  }

  const double corrupt = c.get_double("problem", "corrupt_gradient", 0.0);
  if (corrupt != 0.0) out.problem = corrupt_gradient(out.problem, 0, corrupt);
  return out;
}

ManifoldPoint initial_point(const Problem& problem, std::uint64_t seed) {
  Rng rng(seed ^ 0x2545f4914f6cdd1dULL);
  return random_point(problem.manifold(), rng);
}

std::shared_ptr<const Problem> corrupt_gradient(
    std::shared_ptr<const Problem> inner, std::size_t index,
    double relative_error) {
  return std::make_shared<CorruptedProblem>(std::move(inner), index,
                                            relative_error);
}

}  // namespace rspider::bench
