#include "def_cli.hpp"

#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "def/belief.hpp"
#include "def/common_ground.hpp"
#include "def/dialogue.hpp"
#include "def/encoding.hpp"
#include "def/equilibrium.hpp"
#include "def/errors.hpp"
#include "def/eval.hpp"
#include "def/rng.hpp"
#include "def/vec5.hpp"

namespace def::cli {

namespace {

namespace fs = std::filesystem;

struct Options {
  std::string assertion;
  std::string belief_text;
  std::string init_text;
  std::string assert_text;
  std::string transcript_path;
  std::vector<std::string> transcript_paths;
  std::string data_dir;
  std::string scenario_path;
  std::string out_path;
  std::string trace_path;
  std::string encodings_csv;
  std::string focus;
  std::string strategy = "evidence-injection";
  std::string ground_truth_text;

  double alpha = 1.0;
  double beta = 1.0;
  bool no_cap = false;
  double lambda1 = 1.0;
  double lambda2 = 1.0;
  double eta = 1.0;
  double threshold = 0.3;
  double eq_threshold = -1.0;  // <0: use threshold
  int mu = 50;
  double delta = 0.5;
  double sigma = 0.5;
  bool demo = false;
  int agents = 3;
  int props = 2;

  std::uint64_t seed = 0;
  int precision = 3;
  bool as_json = false;
  bool show_trace = false;

  int groups = 4;
  int utterances = 60;
  double frictive_rate = 0.3;
  int participants = 3;

  int k = 1;
  int runs = 100;
  double ridge_lambda = 1.0;
  int jobs = 1;
  std::string alpha_grid;
  std::string beta_grid;
  std::string k_grid;

  double evidence_min = 1.0;
  double friction_low = 0.3;
  double friction_zero = 0.05;
};

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw InvalidConfig("bad grid value '" + item + "' in '" + text + "'");
    }
  }
  if (out.empty()) throw InvalidConfig("empty grid '" + text + "'");
  return out;
}

std::vector<int> parse_int_grid(const std::string& text) {
  std::vector<int> out;
  for (double v : parse_grid(text)) out.push_back(static_cast<int>(v));
  return out;
}

// Writes either to --out or to the default stream.
void emit(const Options& opt, std::ostream& fallback, const std::string& payload) {
  if (opt.out_path.empty()) {
    fallback << payload;
    return;
  }
  std::ofstream f(opt.out_path);
  if (!f) throw DefError("cannot write '" + opt.out_path + "'");
  f << payload;
}

std::vector<Transcript> load_corpus(const Options& opt) {
  std::vector<Transcript> out;
  if (!opt.data_dir.empty()) {
    std::vector<fs::path> paths;
    for (const auto& entry : fs::directory_iterator(opt.data_dir))
      if (entry.path().extension() == ".json") paths.push_back(entry.path());
    std::sort(paths.begin(), paths.end());
    for (const auto& p : paths) out.push_back(load_transcript(p.string()));
  }
  for (const std::string& p : opt.transcript_paths)
    out.push_back(load_transcript(p));
  if (out.empty())
    throw InvalidConfig("no transcripts given (use --data or --transcript)");
  return out;
}

ExperimentConfig experiment_config(const Options& opt) {
  ExperimentConfig cfg;
  cfg.friction.alpha = opt.alpha;
  cfg.friction.beta = opt.beta;
  cfg.friction.reinforcement_cap = !opt.no_cap;
  cfg.k = opt.k;
  cfg.n_runs = opt.runs;
  cfg.seed = opt.seed;
  cfg.ridge_lambda = opt.ridge_lambda;
  if (!opt.alpha_grid.empty()) cfg.alpha_grid = parse_grid(opt.alpha_grid);
  if (!opt.beta_grid.empty()) cfg.beta_grid = parse_grid(opt.beta_grid);
  if (!opt.k_grid.empty()) cfg.k_grid = parse_int_grid(opt.k_grid);
  return cfg;
}

int cmd_parse(const Options& opt, std::ostream& out) {
  AssertionSet set = parse(opt.assertion);
  if (opt.as_json) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& atom : set.atoms) {
      nlohmann::json a;
      a["subject"] = std::string(block_name(atom.subject));
      a["relation"] = std::string(relation_symbol(atom.rel));
      if (atom.object_is_block())
        a["object_block"] = std::string(block_name(atom.object_block()));
      else
        a["grams"] = atom.grams();
      arr.push_back(a);
    }
    out << arr.dump(2) << "\n";
  } else {
    out << format(set) << "\n";
  }
  return 0;
}

int cmd_encode(const Options& opt, std::ostream& out) {
  Rng rng(opt.seed);
  std::optional<Vec5> belief;
  if (!opt.belief_text.empty()) belief = parse_vec5(opt.belief_text);
  EncodingContext ctx{&rng, belief ? &*belief : nullptr};
  Vec5 v = encode(parse(opt.assertion), ctx);
  out << format_vec(v, opt.precision) << "\n";
  return 0;
}

int cmd_update(const Options& opt, std::ostream& out) {
  Vec5 belief = parse_vec5(opt.belief_text);
  Rng rng(opt.seed);
  EncodingContext ctx{&rng, &belief};
  Vec5 assertion = encode(parse(opt.assert_text), ctx);
  FrictionConfig cfg{opt.alpha, opt.beta, !opt.no_cap};
  out << format_vec(def_update(belief, assertion, cfg), opt.precision) << "\n";
  return 0;
}

int cmd_run_dialogue(const Options& opt, std::ostream& out) {
  Transcript t = load_transcript(opt.transcript_path);
  std::string focus = opt.focus.empty() ? select_focus(t) : opt.focus;
  ExperimentConfig cfg = experiment_config(opt);
  std::optional<Vec5> init;
  if (!opt.init_text.empty()) init = parse_vec5(opt.init_text);
  BeliefTrajectory traj = run_dialogue(t, focus, cfg, opt.seed, init);

  if (!opt.encodings_csv.empty()) {
    std::ofstream csv(opt.encodings_csv);
    if (!csv) throw DefError("cannot write '" + opt.encodings_csv + "'");
    write_encodings_csv(t, opt.seed, csv);
  }

  std::string payload;
  payload += "focus: " + focus + "\n";
  if (opt.show_trace) {
    for (std::size_t i = 0; i < traj.states.size(); ++i)
      payload += std::to_string(i) + " " +
                 format_vec(traj.states[i], opt.precision) + "\n";
  }
  payload += "final: " + format_vec(traj.states.back(), opt.precision) + "\n";
  emit(opt, out, payload);
  return 0;
}

// Tracks the transcript's atoms through QBank/EBank/FBank. Friction is the
// set-theoretic misfit between each claim and the focus participant's
// possible-worlds belief set; accepted claims are treated as consensus and
// announced publicly, filtering the shared model so reiterated claims lose
// friction and promote.
int cmd_banks(const Options& opt, std::ostream& out, std::ostream& err) {
  Transcript t = load_transcript(opt.transcript_path);
  std::string focus = opt.focus.empty() ? select_focus(t) : opt.focus;
  ExperimentConfig cfg = experiment_config(opt);

  Rng rng(opt.seed);
  Vec5 belief = init_belief(rng, cfg.init_low, cfg.init_high);
  WorldsModel model = WorldsModel::default_universe(t.participants);

  CommonGround cg;
  cg.thresholds = {opt.evidence_min, opt.friction_low, opt.friction_zero};

  for (const Utterance& u : t.utterances) {
    std::string source = "u" + std::to_string(u.index);
    for (const std::string& text : u.assertions) {
      AssertionSet set = parse(text);
      for (const Proposition& atom : set.atoms) {
        if (!cg.tracks(atom)) cg = pose(cg, atom);
        if (std::find(cg.fbank.begin(), cg.fbank.end(), atom) != cg.fbank.end())
          continue;
        Formula f = Formula::atom(atom);
        std::vector<World> evidence;
        for (const World& w : model.worlds)
          if (model.satisfies(w, f)) evidence.push_back(w);
        double friction_score =
            set_friction(belief_set(model, focus), f, evidence);
        cg = add_evidence(cg, atom, {source, 1.0, std::nullopt, evidence},
                          friction_score);
        if (std::find(cg.ebank.begin(), cg.ebank.end(), atom) != cg.ebank.end()) {
          try {
            cg = promote_to_fact(cg, atom, friction_score);
          } catch (const InconsistentFact& e) {
            err << "conflict: " << e.what() << "\n";
          }
        }
      }
      // Accepts are consensus moves: everyone's accessibility filters.
      if (u.kind == UtteranceKind::Accept) {
        try {
          model = announce(model, Formula{set.atoms});
        } catch (const EmptyProduct&) {
          err << "contested: cannot announce '" << text << "'\n";
        }
      }
      // The focus belief vector evolves alongside, as in a dialogue run.
      if (u.speaker == focus) {
        for (const Proposition& atom : set.atoms)
          if (atom.is_positive_specific())
            belief = direct_assign(belief, atom.subject, atom.grams());
      } else {
        EncodingContext ctx{&rng, &belief};
        belief = def_update(belief, encode(set, ctx), cfg.friction);
      }
    }
  }

  std::string payload;
  if (opt.as_json) {
    nlohmann::json j = common_ground_to_json(cg);
    j["final_belief"] = belief;
    payload = j.dump(2) + "\n";
  } else {
    payload = format_bank_table(cg);
    payload += "fbank vector: " + format_vec(fbank_vector(cg), opt.precision) + "\n";
    payload += "final belief: " + format_vec(belief, opt.precision) + "\n";
  }
  emit(opt, out, payload);
  return 0;
}

int cmd_equilibrium(const Options& opt, std::ostream& out) {
  EquilibriumConfig cfg;
  cfg.threshold = opt.threshold;
  if (opt.eq_threshold >= 0.0) cfg.equilibrium_threshold = opt.eq_threshold;
  cfg.max_iters = opt.mu;
  cfg.eta = opt.eta;
  cfg.delta = opt.delta;
  cfg.sigma = opt.sigma;
  cfg.weights = {opt.lambda1, opt.lambda2};
  if (opt.strategy == "evidence-injection")
    cfg.strategy = RefineStrategy::EvidenceInjection;
  else if (opt.strategy == "proposition-softening")
    cfg.strategy = RefineStrategy::PropositionSoftening;
  else
    throw InvalidConfig("unknown strategy '" + opt.strategy + "'");

  DiscourseState state;
  if (opt.demo) {
    state = demo_scenario(opt.seed, static_cast<std::size_t>(opt.agents),
                          static_cast<std::size_t>(opt.props));
  } else {
    if (opt.scenario_path.empty())
      throw InvalidConfig("equilibrium needs --scenario or --demo");
    std::ifstream in(opt.scenario_path);
    if (!in) throw DefError("cannot open '" + opt.scenario_path + "'");
    nlohmann::json j;
    in >> j;
    state = scenario_from_json(j, &cfg);
  }

  SolveResult result = solve(state, cfg);
  if (!opt.trace_path.empty()) {
    std::ofstream trace(opt.trace_path);
    if (!trace) throw DefError("cannot write '" + opt.trace_path + "'");
    write_trace_csv(result.trace, trace);
  }

  std::string payload;
  payload += result.outcome == EquilibriumOutcome::Equilibrium
                 ? "outcome: equilibrium\n"
                 : "outcome: no-equilibrium\n";
  payload += "iterations: " + std::to_string(result.trace.size()) + "\n";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "net_friction: %.*f\n", opt.precision,
                result.trace.back().net_friction);
  payload += buf;
  for (std::size_t a = 0; a < result.state.beliefs.size(); ++a)
    payload += "belief " + std::to_string(a) + ": " +
               format_vec(result.state.beliefs[a], opt.precision) + "\n";
  emit(opt, out, payload);
  return 0;
}

int cmd_generate(const Options& opt, std::ostream& out) {
  GeneratorConfig cfg;
  cfg.seed = opt.seed;
  cfg.n_utterances = static_cast<std::size_t>(opt.utterances);
  cfg.frictive_rate = opt.frictive_rate;
  cfg.participants = static_cast<std::size_t>(opt.participants);
  if (!opt.ground_truth_text.empty())
    cfg.ground_truth = parse_vec5(opt.ground_truth_text);

  if (opt.out_path.empty()) throw InvalidConfig("generate needs --out <dir>");
  fs::create_directories(opt.out_path);
  auto corpus = generate_corpus(cfg, static_cast<std::size_t>(opt.groups));
  for (const Transcript& t : corpus) {
    fs::path p = fs::path(opt.out_path) / (t.group_id + ".json");
    save_transcript(t, p.string());
    out << p.string() << "\n";
  }
  return 0;
}

int cmd_evaluate(const Options& opt, std::ostream& out) {
  std::vector<Transcript> corpus = load_corpus(opt);
  ExperimentConfig cfg = experiment_config(opt);
  EvalReport report = logo_cv(corpus, cfg, opt.jobs);
  std::ostringstream csv;
  write_report_csv(report, csv);
  emit(opt, out, csv.str());
  return 0;
}

int cmd_sweep(const Options& opt, std::ostream& out) {
  std::vector<Transcript> corpus = load_corpus(opt);
  ExperimentConfig cfg = experiment_config(opt);
  SweepReport report = sweep(corpus, cfg, opt.jobs);
  std::ostringstream csv;
  write_sweep_csv(report, csv);
  emit(opt, out, csv.str());
  return 0;
}

// Builds the full app; `opt` and the handler wiring outlive parsing.
void build_app(CLI::App& app, Options& opt, std::ostream& out, std::ostream& err,
               int& rc) {
  app.description("dynamic epistemic friction toolkit");
  app.require_subcommand(1);

  auto add_seed = [&](CLI::App* cmd) {
    cmd->add_option("--seed", opt.seed, "random seed")->envname("DEF_SEED");
  };
  auto add_precision = [&](CLI::App* cmd) {
    cmd->add_option("--precision", opt.precision, "output decimal places");
  };

  CLI::App* parse_cmd =
      app.add_subcommand("parse", "parse an assertion string");
  parse_cmd->add_option("assertion", opt.assertion, "e.g. \"red=10 & blue=10\"")
      ->required();
  parse_cmd->add_flag("--json", opt.as_json, "emit structured JSON");
  parse_cmd->callback([&]() { rc = cmd_parse(opt, out); });

  CLI::App* encode_cmd =
      app.add_subcommand("encode", "vectorize an assertion string");
  encode_cmd->add_option("assertion", opt.assertion, "assertion to encode")
      ->required();
  encode_cmd->add_option("--belief", opt.belief_text,
                         "belief vector for block-block atoms");
  add_seed(encode_cmd);
  add_precision(encode_cmd);
  encode_cmd->callback([&]() { rc = cmd_encode(opt, out); });

  CLI::App* update_cmd =
      app.add_subcommand("update", "apply one belief update");
  update_cmd->add_option("--belief", opt.belief_text, "current belief vector")
      ->required();
  update_cmd->add_option("--assert", opt.assert_text, "interlocutor assertion")
      ->required();
  update_cmd->add_option("--alpha", opt.alpha, "friction force coefficient");
  update_cmd->add_option("--beta", opt.beta, "reinforcement ceiling");
  update_cmd->add_flag("--no-cap", opt.no_cap, "raw uncapped update rule");
  add_seed(update_cmd);
  add_precision(update_cmd);
  update_cmd->callback([&]() { rc = cmd_update(opt, out); });

  CLI::App* run_cmd =
      app.add_subcommand("run-dialogue", "simulate a focus participant");
  run_cmd->add_option("--transcript", opt.transcript_path, "transcript JSON")
      ->required();
  run_cmd->add_option("--focus", opt.focus, "focus id (default: least speaker)");
  run_cmd->add_option("--init", opt.init_text, "initial belief override");
  run_cmd->add_option("--alpha", opt.alpha, "friction force coefficient");
  run_cmd->add_option("--beta", opt.beta, "reinforcement ceiling");
  run_cmd->add_flag("--trace", opt.show_trace, "print every snapshot");
  run_cmd->add_option("--encodings-csv", opt.encodings_csv,
                      "write per-utterance encodings CSV");
  run_cmd->add_option("--out", opt.out_path, "write output to file");
  add_seed(run_cmd);
  add_precision(run_cmd);
  run_cmd->callback([&]() { rc = cmd_run_dialogue(opt, out); });

  CLI::App* banks_cmd =
      app.add_subcommand("banks", "track QBank/EBank/FBank over a dialogue");
  banks_cmd->add_option("--transcript", opt.transcript_path, "transcript JSON")
      ->required();
  banks_cmd->add_option("--focus", opt.focus, "focus id (default: least speaker)");
  banks_cmd->add_option("--alpha", opt.alpha, "friction force coefficient");
  banks_cmd->add_option("--beta", opt.beta, "reinforcement ceiling");
  banks_cmd->add_option("--evidence-min", opt.evidence_min,
                        "strength needed to leave QBank");
  banks_cmd->add_option("--friction-low", opt.friction_low,
                        "max friction for QBank->EBank");
  banks_cmd->add_option("--friction-zero", opt.friction_zero,
                        "max friction for EBank->FBank");
  banks_cmd->add_flag("--json", opt.as_json, "emit JSON snapshot");
  banks_cmd->add_option("--out", opt.out_path, "write output to file");
  add_seed(banks_cmd);
  add_precision(banks_cmd);
  banks_cmd->callback([&]() { rc = cmd_banks(opt, out, err); });

  CLI::App* eq_cmd =
      app.add_subcommand("equilibrium", "run the friction equilibrium solver");
  eq_cmd->add_option("--scenario", opt.scenario_path, "scenario JSON file");
  eq_cmd->add_flag("--demo", opt.demo, "use the built-in seeded scenario");
  eq_cmd->add_option("--agents", opt.agents, "demo participant count");
  eq_cmd->add_option("--props", opt.props, "demo proposition count");
  eq_cmd->add_option("--eta", opt.eta, "gradient step size");
  eq_cmd->add_option("--threshold", opt.threshold, "high-friction threshold T");
  eq_cmd->add_option("--eq-threshold", opt.eq_threshold,
                     "equilibrium cutoff override");
  eq_cmd->add_option("--mu", opt.mu, "max iterations");
  eq_cmd->add_option("--strategy", opt.strategy,
                     "evidence-injection|proposition-softening");
  eq_cmd->add_option("--delta", opt.delta, "evidence injection scale");
  eq_cmd->add_option("--sigma", opt.sigma, "proposition softening blend");
  eq_cmd->add_option("--lambda1", opt.lambda1, "proposition weight");
  eq_cmd->add_option("--lambda2", opt.lambda2, "evidence weight");
  eq_cmd->add_option("--trace", opt.trace_path, "write trace CSV");
  eq_cmd->add_option("--out", opt.out_path, "write output to file");
  add_seed(eq_cmd);
  add_precision(eq_cmd);
  eq_cmd->callback([&]() { rc = cmd_equilibrium(opt, out); });

  CLI::App* gen_cmd =
      app.add_subcommand("generate", "generate a synthetic corpus");
  gen_cmd->add_option("--out", opt.out_path, "output directory")->required();
  gen_cmd->add_option("--groups", opt.groups, "number of groups");
  gen_cmd->add_option("--utterances", opt.utterances, "utterances per group");
  gen_cmd->add_option("--frictive-rate", opt.frictive_rate,
                      "fraction of contradicting assertions");
  gen_cmd->add_option("--participants", opt.participants, "participants per group");
  gen_cmd->add_option("--ground-truth", opt.ground_truth_text,
                      "ground truth weights vector");
  add_seed(gen_cmd);
  gen_cmd->callback([&]() { rc = cmd_generate(opt, out); });

  auto add_eval_common = [&](CLI::App* cmd) {
    cmd->add_option("--data", opt.data_dir, "directory of transcript JSONs");
    cmd->add_option("--transcript", opt.transcript_paths,
                    "individual transcript file (repeatable)");
    cmd->add_option("--runs", opt.runs, "iterations to average over");
    cmd->add_option("--ridge-lambda", opt.ridge_lambda, "L2 scaling constant");
    cmd->add_option("--out", opt.out_path, "write CSV to file");
    cmd->add_option("--jobs", opt.jobs, "worker threads");
    add_seed(cmd);
  };

  CLI::App* eval_cmd =
      app.add_subcommand("evaluate", "leave-one-group-out evaluation");
  add_eval_common(eval_cmd);
  eval_cmd->add_option("--alpha", opt.alpha, "friction force coefficient");
  eval_cmd->add_option("--beta", opt.beta, "reinforcement ceiling");
  eval_cmd->add_option("--k", opt.k, "history window size");
  eval_cmd->callback([&]() { rc = cmd_evaluate(opt, out); });

  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "grid sweep over alpha/beta/k");
  add_eval_common(sweep_cmd);
  sweep_cmd->add_option("--alpha-grid", opt.alpha_grid,
                        "comma-separated alpha values");
  sweep_cmd->add_option("--beta-grid", opt.beta_grid,
                        "comma-separated beta values");
  sweep_cmd->add_option("--k-grid", opt.k_grid, "comma-separated k values");
  sweep_cmd->callback([&]() { rc = cmd_sweep(opt, out); });
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  Options opt;
  int rc = 0;
  CLI::App app{"", "def"};
  build_app(app, opt, out, err, rc);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    auto active = app.get_subcommands();
    out << (active.empty() ? app.help() : active.front()->help());
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    err << app.help();
    return 2;
  } catch (const DefError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return rc;
}

std::vector<std::string> subcommand_names() {
  return {"parse",       "encode",      "update",   "run-dialogue", "banks",
          "equilibrium", "generate", "evaluate", "sweep"};
}

std::string help_text(const std::string& subcommand) {
  Options opt;
  int rc = 0;
  std::ostringstream out, err;
  CLI::App app{"", "def"};
  build_app(app, opt, out, err, rc);
  return app.get_subcommand(subcommand)->help();
}

std::vector<std::string> declared_flags(const std::string& subcommand) {
  Options opt;
  int rc = 0;
  std::ostringstream out, err;
  CLI::App app{"", "def"};
  build_app(app, opt, out, err, rc);
  std::vector<std::string> names;
  for (const CLI::Option* o : app.get_subcommand(subcommand)->get_options()) {
    if (!o->get_lnames().empty())
      names.push_back("--" + o->get_lnames().front());
    else
      names.push_back(o->get_name());
  }
  return names;
}

}  // namespace def::cli
