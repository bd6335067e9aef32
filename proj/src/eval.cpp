#include "def/eval.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <thread>

#include "def/encoding.hpp"
#include "def/errors.hpp"

namespace def {

Vec5 init_belief(Rng& rng, double low, double high) {
  Vec5 v;
  v[0] = 10.0;  // red is given by the task setup
  for (int i = 1; i < 5; ++i) v[i] = rng.uniform(low, high);
  return v;
}

Vec5 init_belief(std::uint64_t seed, double low, double high) {
  Rng rng(seed);
  return init_belief(rng, low, high);
}

BeliefTrajectory run_dialogue(const Transcript& t, const std::string& focus,
                              const ExperimentConfig& cfg, std::uint64_t seed,
                              const std::optional<Vec5>& init) {
  if (std::find(t.participants.begin(), t.participants.end(), focus) ==
      t.participants.end())
    throw DefError("focus '" + focus + "' is not a participant of '" +
                   t.group_id + "'");

  Rng rng(seed);
  BeliefTrajectory traj;
  traj.focus = focus;
  Vec5 belief = init ? *init : init_belief(rng, cfg.init_low, cfg.init_high);
  traj.states.push_back(belief);

  for (const Utterance& u : t.utterances) {
    bool processed = false;
    if (u.speaker == focus) {
      // Saying-is-Believing: positive specific claims pin their component;
      // everything else the focus says leaves its own vector untouched.
      for (const std::string& text : u.assertions) {
        for (const Proposition& atom : parse(text).atoms) {
          if (atom.is_positive_specific()) {
            belief = direct_assign(belief, atom.subject, atom.grams());
            processed = true;
          }
        }
      }
    } else {
      for (const std::string& text : u.assertions) {
        EncodingContext ctx{&rng, &belief};
        Vec5 encoded = encode(parse(text), ctx);
        belief = def_update(belief, encoded, cfg.friction);
        processed = true;
      }
    }
    if (processed) traj.states.push_back(belief);
  }
  return traj;
}

std::vector<double> extract_features(const BeliefTrajectory& traj, int k) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(k) * 5);
  int n = static_cast<int>(traj.states.size());
  for (int i = n - k; i < n; ++i) {
    const Vec5& s = traj.states[static_cast<std::size_t>(std::max(i, 0))];
    out.insert(out.end(), s.begin(), s.end());
  }
  return out;
}

Matrix ridge_fit_primal(const Matrix& x, const Matrix& y, double lambda) {
  Matrix xt = transpose(x);
  Matrix gram = madd(matmul(xt, x), mscale(Matrix::identity(x.cols), lambda));
  return solve_linear(gram, matmul(xt, y));
}

Matrix ridge_fit_dual(const Matrix& x, const Matrix& y, double lambda) {
  Matrix gram = madd(matmul(x, transpose(x)),
                     mscale(Matrix::identity(x.rows), lambda));
  return matmul(transpose(x), solve_linear(gram, y));
}

Matrix ridge_fit(const Matrix& x, const Matrix& y, double lambda) {
  return x.cols > x.rows ? ridge_fit_dual(x, y, lambda)
                         : ridge_fit_primal(x, y, lambda);
}

double rmse(const Vec5& pred, const Vec5& truth) {
  double sum = 0.0;
  for (int i = 0; i < 5; ++i) {
    double d = pred[i] - truth[i];
    sum += d * d;
  }
  return std::sqrt(sum / 5.0);
}

double EvalReport::overall_mean() const {
  double sum = 0.0;
  for (const GroupResult& g : groups) sum += g.rmse_mean;
  return groups.empty() ? 0.0 : sum / static_cast<double>(groups.size());
}

namespace {

std::uint64_t dialogue_seed(std::uint64_t base, int run, const std::string& group) {
  return SeedHash()
      .mix(base)
      .mix(static_cast<std::uint64_t>(run))
      .mix(group)
      .value();
}

}  // namespace

EvalReport logo_cv(const std::vector<Transcript>& transcripts,
                   const ExperimentConfig& cfg, int jobs) {
  if (transcripts.size() < 2)
    throw InvalidConfig("leave-one-group-out needs at least 2 transcripts");
  if (cfg.k < 1) throw InvalidConfig("history window k must be at least 1");
  if (cfg.n_runs < 1) throw InvalidConfig("n_runs must be at least 1");
  if (cfg.ridge_lambda < 0.0)
    throw InvalidConfig("ridge lambda must be nonnegative");

  // Fold identity is the group id, independent of list order.
  std::vector<const Transcript*> groups;
  for (const Transcript& t : transcripts) groups.push_back(&t);
  std::sort(groups.begin(), groups.end(),
            [](const Transcript* a, const Transcript* b) {
              return a->group_id < b->group_id;
            });
  for (std::size_t i = 1; i < groups.size(); ++i)
    if (groups[i]->group_id == groups[i - 1]->group_id)
      throw InvalidConfig("duplicate group_id '" + groups[i]->group_id + "'");

  const std::size_t n_groups = groups.size();
  const std::size_t dim = static_cast<std::size_t>(cfg.k) * 5;

  // errors[g][r] for group g, run r; slots preassigned so worker scheduling
  // cannot affect the aggregate.
  std::vector<std::vector<double>> errors(
      n_groups, std::vector<double>(static_cast<std::size_t>(cfg.n_runs), 0.0));

  auto run_one = [&](int run) {
    std::vector<std::vector<double>> features(n_groups);
    for (std::size_t g = 0; g < n_groups; ++g) {
      const Transcript& t = *groups[g];
      std::uint64_t seed = dialogue_seed(cfg.seed, run, t.group_id);
      BeliefTrajectory traj = run_dialogue(t, select_focus(t), cfg, seed);
      features[g] = extract_features(traj, cfg.k);
    }

    for (std::size_t held = 0; held < n_groups; ++held) {
      Matrix x(n_groups - 1, dim);
      Matrix y(n_groups - 1, 5);
      std::size_t row = 0;
      for (std::size_t g = 0; g < n_groups; ++g) {
        if (g == held) continue;
        for (std::size_t c = 0; c < dim; ++c) x.at(row, c) = features[g][c];
        for (int c = 0; c < 5; ++c) y.at(row, c) = cfg.ground_truth[c];
        ++row;
      }

      // The intercept ablation fits centered with the offset left
      // unpenalized; with the constant target it collapses to zero test
      // error, which is exactly why the default fit has no intercept.
      std::vector<double> x_mean(dim, 0.0);
      Vec5 y_mean = kZeroVec;
      if (cfg.intercept) {
        for (std::size_t r = 0; r < x.rows; ++r)
          for (std::size_t c = 0; c < dim; ++c)
            x_mean[c] += x.at(r, c) / static_cast<double>(x.rows);
        for (std::size_t r = 0; r < y.rows; ++r)
          for (int c = 0; c < 5; ++c)
            y_mean[c] += y.at(r, c) / static_cast<double>(y.rows);
        for (std::size_t r = 0; r < x.rows; ++r) {
          for (std::size_t c = 0; c < dim; ++c) x.at(r, c) -= x_mean[c];
          for (int c = 0; c < 5; ++c) y.at(r, c) -= y_mean[c];
        }
      }
      Matrix w = ridge_fit(x, y, cfg.ridge_lambda);

      Vec5 pred = y_mean;
      for (int c = 0; c < 5; ++c)
        for (std::size_t d = 0; d < dim; ++d)
          pred[c] += (features[held][d] - x_mean[d]) * w.at(d, c);
      errors[held][static_cast<std::size_t>(run)] = rmse(pred, cfg.ground_truth);
    }
  };

  if (jobs <= 1) {
    for (int run = 0; run < cfg.n_runs; ++run) run_one(run);
  } else {
    std::atomic<int> next_run{0};
    auto worker = [&]() {
      while (true) {
        int run = next_run.fetch_add(1);
        if (run >= cfg.n_runs) return;
        run_one(run);
      }
    };
    std::vector<std::thread> pool;
    for (int i = 0; i < jobs; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  EvalReport report;
  report.alpha = cfg.friction.alpha;
  report.beta = cfg.friction.beta;
  report.k = cfg.k;
  report.n_runs = cfg.n_runs;
  report.ground_truth = cfg.ground_truth;
  for (std::size_t g = 0; g < n_groups; ++g) {
    GroupResult r;
    r.group_id = groups[g]->group_id;
    double mean = 0.0;
    for (double e : errors[g]) mean += e;
    mean /= static_cast<double>(errors[g].size());
    r.rmse_mean = mean;
    if (errors[g].size() > 1) {
      double var = 0.0;
      for (double e : errors[g]) var += (e - mean) * (e - mean);
      var /= static_cast<double>(errors[g].size() - 1);
      r.rmse_stderr = std::sqrt(var / static_cast<double>(errors[g].size()));
    }
    report.groups.push_back(std::move(r));
  }
  return report;
}

SweepReport sweep(const std::vector<Transcript>& transcripts,
                  const ExperimentConfig& cfg, int jobs) {
  struct Cell {
    double alpha;
    double beta;
    int k;
  };
  std::vector<Cell> cells;
  for (double alpha : cfg.alpha_grid)
    for (double beta : cfg.beta_grid)
      for (int k : cfg.k_grid) cells.push_back({alpha, beta, k});

  SweepReport report;
  report.cells.resize(cells.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      ExperimentConfig cell_cfg = cfg;
      cell_cfg.friction.alpha = cells[i].alpha;
      cell_cfg.friction.beta = cells[i].beta;
      cell_cfg.k = cells[i].k;
      report.cells[i] = logo_cv(transcripts, cell_cfg);
    }
  };

  int n_threads = std::max(1, jobs);
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return report;
}

namespace {

std::string format_double(double v, const char* fmt) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

}  // namespace

void write_report_csv(const EvalReport& report, std::ostream& out) {
  out << "group,k,rmse_mean,rmse_stderr\n";
  for (const GroupResult& g : report.groups)
    out << g.group_id << ',' << report.k << ','
        << format_double(g.rmse_mean, "%.6f") << ','
        << format_double(g.rmse_stderr, "%.6f") << "\n";
}

void write_sweep_csv(const SweepReport& report, std::ostream& out) {
  out << "alpha,beta,k,group,rmse_mean,rmse_stderr\n";
  for (const EvalReport& cell : report.cells)
    for (const GroupResult& g : cell.groups)
      out << format_double(cell.alpha, "%g") << ','
          << format_double(cell.beta, "%g") << ',' << cell.k << ','
          << g.group_id << ',' << format_double(g.rmse_mean, "%.6f") << ','
          << format_double(g.rmse_stderr, "%.6f") << "\n";
}

}  // namespace def
