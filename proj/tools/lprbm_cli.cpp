// lprbm: lattice-protein RBM toolkit.
// Subcommands: folds, data, train, eval, sample, report.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "lprbm/design.hpp"
#include "lprbm/digest.hpp"
#include "lprbm/eval.hpp"
#include "lprbm/fold.hpp"
#include "lprbm/mj.hpp"
#include "lprbm/msa.hpp"
#include "lprbm/parallel.hpp"
#include "lprbm/pca.hpp"
#include "lprbm/pnat.hpp"
#include "lprbm/provenance.hpp"
#include "lprbm/rbm.hpp"
#include "lprbm/train.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace lprbm;

namespace {

struct DivergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string default_mj_path() {
  if (const char* dir = std::getenv("LPRBM_DATA_DIR"))
    return (fs::path(dir) / "mj96_table3.txt").string();
  return "data/mj96_table3.txt";
}

// shared context loaded on demand
struct World {
  std::string folds_path;
  std::string mj_path = default_mj_path();
  std::optional<FoldSet> folds;
  std::optional<MjPotential> mj;
  std::optional<PnatModel> pnat;

  const FoldSet& get_folds() {
    if (!folds) {
      if (folds_path.empty()) throw std::runtime_error("--folds file required");
      folds = load_folds(folds_path);
    }
    return *folds;
  }
  const MjPotential& get_mj() {
    if (!mj) mj = MjPotential::load(mj_path);
    return *mj;
  }
  const PnatModel& get_pnat() {
    if (!pnat) pnat = PnatModel(get_folds(), get_mj());
    return *pnat;
  }
};

void write_tsv_header(std::ofstream& out, const std::string& hash,
                      const std::string& columns) {
  out << "# config: " << hash << "\n" << columns << "\n";
}

std::vector<double> parse_value_list(const std::string& csv) {
  std::vector<double> out;
  std::string tok;
  std::istringstream ss(csv);
  while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
  if (out.empty()) throw std::runtime_error("empty value list");
  return out;
}

// ---------------------------------------------------------------- folds ----
void cmd_folds_enumerate(const std::string& convention_name, const std::string& out_path) {
  const auto conv = convention_from_string(convention_name);
  if (!conv) throw std::runtime_error("unknown convention: " + convention_name);
  json cfg{{"cmd", "folds enumerate"}, {"convention", convention_name}, {"out", out_path}};
  const FoldSet set = enumerate_folds(*conv);
  save_folds(out_path, set, config_hash(cfg));
  write_provenance(out_path, cfg);
  std::cout << "folds: " << set.size() << " (" << to_string(set.convention)
            << "), distinct contact maps: " << set.num_classes() << "\n";
}

// ----------------------------------------------------------------- data ----
void cmd_data_generate(World& world, std::uint32_t target, int n, double threshold,
                       const McConfig& mc, std::uint64_t seed, int threads,
                       const std::string& out_path) {
  json cfg{{"cmd", "data generate"},   {"target_fold", target},
           {"n", n},                   {"threshold", threshold},
           {"seed", seed},             {"chains", mc.n_chains},
           {"burn_in", mc.burn_in_sweeps}, {"thin", mc.thin_sweeps},
           {"temperature", mc.temperature}, {"mj", world.get_mj().source_hash()}};
  const auto& pnat = world.get_pnat();

  // chains run as independent jobs; output is assembled in chain order
  std::vector<Msa> parts(static_cast<std::size_t>(mc.n_chains));
  parallel_jobs(mc.n_chains, threads, [&](int chain) {
    McConfig one = mc;
    one.n_chains = 1;
    const int quota = n / mc.n_chains + (chain < n % mc.n_chains ? 1 : 0);
    // stream ids must match the single-threaded layout: derive from (seed, chain)
    parts[static_cast<std::size_t>(chain)] =
        generate_msa(pnat, target, quota, threshold, one,
                     Rng::stream(seed, static_cast<std::uint64_t>(chain)).next_u64());
  });
  Msa msa;
  {
    std::ostringstream prov;
    prov << "generator=mc-metropolis target=" << target << " seed=" << seed
         << " threshold=" << threshold << " chains=" << mc.n_chains
         << " burn_in=" << mc.burn_in_sweeps << " thin=" << mc.thin_sweeps
         << " T=" << mc.temperature;
    msa.provenance = prov.str();
  }
  for (auto& p : parts) {
    msa.sequences.insert(msa.sequences.end(), p.sequences.begin(), p.sequences.end());
    msa.labels.insert(msa.labels.end(), p.labels.begin(), p.labels.end());
  }
  save_msa(out_path, msa, config_hash(cfg));
  write_provenance(out_path, cfg);
  std::cout << "generated " << msa.size() << " sequences -> " << out_path << "\n";
}

void cmd_data_shuffle(const std::string& in_path, std::uint64_t seed,
                      const std::string& out_path) {
  json cfg{{"cmd", "data shuffle"}, {"in", in_path}, {"seed", seed}};
  const Msa msa = load_msa(in_path);
  Msa shuffled = shuffle_columns(msa, seed);
  shuffled.provenance = "column-shuffled seed=" + std::to_string(seed);
  save_msa(out_path, shuffled, config_hash(cfg));
  write_provenance(out_path, cfg);
  std::cout << "shuffled " << shuffled.size() << " sequences -> " << out_path << "\n";
}

void cmd_data_split(const std::string& in_path, double fraction, std::uint64_t seed,
                    const std::string& out_train, const std::string& out_test) {
  json cfg{{"cmd", "data split"}, {"in", in_path}, {"fraction", fraction}, {"seed", seed}};
  const Msa msa = load_msa(in_path);
  auto [train_part, test_part] = split(msa, fraction, seed);
  save_msa(out_train, train_part, config_hash(cfg));
  save_msa(out_test, test_part, config_hash(cfg));
  write_provenance(out_train, cfg);
  std::cout << "split " << msa.size() << " -> " << train_part.size() << " + "
            << test_part.size() << "\n";
}

// ---------------------------------------------------------------- train ----
void write_train_log(const std::string& path, const std::vector<TrainLogRow>& log,
                     const std::string& hash) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write training log: " + path);
  write_tsv_header(out, hash,
                   "epoch\tlearning_rate\tdata_energy\tmodel_energy\treg_value\t"
                   "weight_norm\tsparsity_p\tactive_l");
  out.precision(10);
  for (const auto& r : log)
    out << r.epoch << "\t" << r.learning_rate << "\t" << r.data_energy << "\t"
        << r.model_energy << "\t" << r.reg_value << "\t" << r.weight_norm << "\t"
        << r.sparsity_p << "\t" << r.active_l << "\n";
}

void cmd_train(const std::string& msa_path, int hidden, const std::string& potential,
               TrainConfig tc, const std::string& out_path) {
  json cfg{{"cmd", "train"},       {"msa", msa_path},
           {"hidden", hidden},     {"potential", potential},
           {"l1b2", tc.lambda_l1b2}, {"l2_fields", tc.lambda_field_l2},
           {"epochs", tc.n_epochs},  {"batch", tc.batch_size},
           {"chains", tc.n_chains},  {"gibbs", tc.gibbs_steps},
           {"lr", tc.learning_rate}, {"seed", tc.seed}};
  const Msa msa = load_msa(msa_path);
  ModelSpec spec;
  spec.n_hidden = hidden;
  const auto kind = HiddenPotential::kind_from_name(potential);
  switch (kind) {
    case HiddenPotential::Kind::kBernoulli: spec.potential = HiddenPotential::bernoulli(0.0); break;
    case HiddenPotential::Kind::kQuadratic: spec.potential = HiddenPotential::quadratic(1.0, 0.0); break;
    case HiddenPotential::Kind::kRelu: spec.potential = HiddenPotential::relu(1.0, 0.0); break;
    case HiddenPotential::Kind::kDRelu: spec.potential = HiddenPotential::drelu(1.0, 1.0, 0.0, 0.0); break;
  }
  TrainResult result;
  try {
    result = train(msa.sequences, kAlphabetSize, spec, tc);
  } catch (const std::runtime_error& e) {
    if (std::string(e.what()).find("diverged") != std::string::npos)
      throw DivergenceError(e.what());
    throw;
  }
  save_model(out_path, result.model);
  write_train_log(out_path + ".log.tsv", result.log, config_hash(cfg));
  write_provenance(out_path, cfg);
  const auto sp = weight_sparsity(result.model);
  std::cout << "trained M=" << hidden << " on " << msa.size()
            << " sequences; median p=" << sp.median << " -> " << out_path << "\n";
}

// ----------------------------------------------------------------- eval ----
void cmd_eval_likelihood(const std::string& model_path, const std::string& msa_path,
                         int ais_betas, int ais_chains, std::uint64_t seed,
                         const std::string& out_path) {
  json cfg{{"cmd", "eval likelihood"}, {"model", model_path}, {"msa", msa_path},
           {"ais_betas", ais_betas},   {"ais_chains", ais_chains}, {"seed", seed}};
  const RbmModel model = load_model(model_path);
  const Msa msa = load_msa(msa_path);
  const AisResult ais = ais_log_z(model, ais_betas, ais_chains, seed);
  const LikelihoodReport ll = log_likelihood(model, msa.sequences, ais.log_z);
  json rep{{"config_hash", config_hash(cfg)},
           {"log_z", ais.log_z},
           {"log_z_std_err", ais.std_err},
           {"ais_ess", ais.ess},
           {"ais_low_ess_warning", ais.low_ess_warning},
           {"n_sequences", msa.size()},
           {"mean_log_likelihood", ll.mean}};
  if (ais.low_ess_warning)
    std::cerr << "warning: AIS effective sample size below 10% of chains\n";
  if (out_path.empty()) {
    std::cout << rep.dump(1) << "\n";
  } else {
    std::ofstream out(out_path);
    out << rep.dump(1) << "\n";
    write_provenance(out_path, cfg);
    std::cout << "log_z=" << ais.log_z << " +- " << ais.std_err
              << ", mean LL=" << ll.mean << " -> " << out_path << "\n";
  }
}

void cmd_eval_features(World& world, const std::string& model_path,
                       std::uint32_t target, const std::string& msa_path,
                       const std::string& out_path) {
  json cfg{{"cmd", "eval features"}, {"model", model_path}, {"target_fold", target},
           {"msa", msa_path}};
  const RbmModel model = load_model(model_path);
  const auto& folds = world.get_folds();
  if (target >= folds.size()) throw std::runtime_error("target fold out of range");
  const auto features = locate_features(model);
  const auto analysis = contact_analysis(features, folds.folds[target]);
  const auto sparsity = weight_sparsity(model);
  std::vector<double> importance;
  if (!msa_path.empty()) {
    const Msa msa = load_msa(msa_path);
    importance = feature_importance(model, msa.sequences);
  }
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write: " + out_path);
  write_tsv_header(out, config_hash(cfg),
                   "unit\tp_mu\tsupport_sites\tclass\tcontact_tp\timportance");
  out.precision(8);
  for (int mu = 0; mu < model.n_hidden(); ++mu) {
    out << mu << "\t" << sparsity.per_unit[static_cast<std::size_t>(mu)] << "\t";
    const auto& f = features[static_cast<std::size_t>(mu)];
    for (std::size_t k = 0; k < f.sites.size(); ++k)
      out << (k ? "," : "") << f.sites[k];
    out << "\t" << to_string(f.cls) << "\t"
        << analysis.true_positive_flag[static_cast<std::size_t>(mu)] << "\t"
        << (importance.empty() ? 0.0 : importance[static_cast<std::size_t>(mu)]) << "\n";
  }
  out << "# pairs: " << analysis.pair_true_positive << "/" << analysis.pair_features
      << " triplets: " << analysis.triplet_true_positive << "/"
      << analysis.triplet_features << "\n";
  write_provenance(out_path, cfg);
  std::cout << "pairs " << analysis.pair_true_positive << "/" << analysis.pair_features
            << ", triplets " << analysis.triplet_true_positive << "/"
            << analysis.triplet_features << " -> " << out_path << "\n";
}

struct SweepPoint {
  double param;
  double p_median, p_mean, l_median, l_weighted, omax_median;
  double train_ll, test_ll, log_z, log_z_err;
};

void cmd_eval_sweep(const std::string& mode, const std::string& values_csv,
                    const std::string& train_path, const std::string& test_path,
                    int hidden, double l1b2, TrainConfig base, int ais_betas,
                    int ais_chains, const std::string& out_path) {
  json cfg{{"cmd", "eval sweep"}, {"mode", mode}, {"values", values_csv},
           {"msa", train_path},   {"test", test_path}, {"hidden", hidden},
           {"l1b2", l1b2},        {"epochs", base.n_epochs}, {"seed", base.seed}};
  const Msa train_msa = load_msa(train_path);
  const Msa test_msa = load_msa(test_path);
  const auto values = parse_value_list(values_csv);

  std::vector<SweepPoint> points;
  for (double value : values) {
    TrainConfig tc = base;
    ModelSpec spec;
    spec.potential = HiddenPotential::drelu(1.0, 1.0, 0.0, 0.0);
    if (mode == "lambda") {
      spec.n_hidden = hidden;
      tc.lambda_l1b2 = value;
    } else if (mode == "hidden") {
      spec.n_hidden = static_cast<int>(value);
      tc.lambda_l1b2 = l1b2;
    } else {
      throw std::runtime_error("sweep mode must be lambda or hidden");
    }
    const TrainResult result = train(train_msa.sequences, kAlphabetSize, spec, tc);
    const auto sp = weight_sparsity(result.model);
    const auto ov = overlaps(result.model);
    const auto lw = weighted_active_units(result.model, train_msa.sequences, ov);
    const auto lu = active_units(result.model, train_msa.sequences);
    const AisResult ais = ais_log_z(result.model, ais_betas, ais_chains, base.seed);
    SweepPoint pt;
    pt.param = value;
    pt.p_median = sp.median;
    pt.p_mean = sp.mean;
    pt.l_median = lu.median;
    pt.l_weighted = lw.median;
    std::vector<double> omax = ov.max_abs;
    std::nth_element(omax.begin(), omax.begin() + omax.size() / 2, omax.end());
    pt.omax_median = omax[omax.size() / 2];
    pt.train_ll = log_likelihood(result.model, train_msa.sequences, ais.log_z).mean;
    pt.test_ll = log_likelihood(result.model, test_msa.sequences, ais.log_z).mean;
    pt.log_z = ais.log_z;
    pt.log_z_err = ais.std_err;
    points.push_back(pt);
    std::cout << mode << "=" << value << " p_med=" << pt.p_median
              << " L_w=" << pt.l_weighted << " test_ll=" << pt.test_ll << "\n";
  }
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write: " + out_path);
  write_tsv_header(out, config_hash(cfg),
                   "param\tp_median\tp_mean\tl_median\tl_weighted\tomax_median\t"
                   "train_ll\ttest_ll\tlog_z\tlog_z_err");
  out.precision(10);
  for (const auto& pt : points)
    out << pt.param << "\t" << pt.p_median << "\t" << pt.p_mean << "\t" << pt.l_median
        << "\t" << pt.l_weighted << "\t" << pt.omax_median << "\t" << pt.train_ll
        << "\t" << pt.test_ll << "\t" << pt.log_z << "\t" << pt.log_z_err << "\n";
  write_provenance(out_path, cfg);
}

// --------------------------------------------------------------- sample ----
void cmd_sample(World& world, const std::string& model_path, int n,
                const std::string& clamp_arg, int power, SampleConfig sc,
                std::uint32_t target, const std::string& training_path,
                const std::string& out_path, const std::string& report_path) {
  json cfg{{"cmd", "sample"}, {"model", model_path}, {"n", n}, {"clamp", clamp_arg},
           {"power", power},  {"seed", sc.seed},     {"target_fold", target}};
  const RbmModel model = load_model(model_path);

  std::vector<Sequence> seqs;
  std::string mode = "gibbs";
  if (!clamp_arg.empty()) {
    const auto eq = clamp_arg.find('=');
    if (eq == std::string::npos) throw std::runtime_error("--clamp expects unit=value");
    const int unit = std::stoi(clamp_arg.substr(0, eq));
    const double value = std::stod(clamp_arg.substr(eq + 1));
    seqs = conditional_sample(model, {{unit, value}}, n, sc);
    mode = "clamp:" + clamp_arg;
  } else if (power > 1) {
    seqs = low_temperature_sample(model, power, n, sc);
    mode = "power:" + std::to_string(power);
  } else {
    seqs = sample_sequences(model, n, sc);
  }

  Msa out_msa;
  out_msa.sequences = seqs;
  out_msa.provenance = "sampled mode=" + mode + " seed=" + std::to_string(sc.seed);
  if (!report_path.empty()) {
    const Msa training = load_msa(training_path);
    DesignReport rep =
        score_designs(std::move(seqs), world.get_pnat(), target, training, mode);
    out_msa.labels = rep.p_nat;
    save_design_report(report_path, rep, config_hash(cfg));
  }
  save_msa(out_path, out_msa, config_hash(cfg));
  write_provenance(out_path, cfg);
  std::cout << "sampled " << out_msa.size() << " sequences (" << mode << ") -> "
            << out_path << "\n";
}

// --------------------------------------------------------------- report ----
void cmd_report_importance(World& world, const std::string& msa_path, int hidden,
                           double l1b2, int n_seeds, TrainConfig base,
                           const std::string& out_path) {
  json cfg{{"cmd", "report importance"}, {"msa", msa_path},   {"hidden", hidden},
           {"l1b2", l1b2},               {"n_seeds", n_seeds}, {"epochs", base.n_epochs}};
  (void)world;
  const Msa msa = load_msa(msa_path);
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write: " + out_path);
  write_tsv_header(out, config_hash(cfg), "seed\tdata\tkind\tindex\timportance\tclass");
  out.precision(8);
  for (int s = 0; s < n_seeds; ++s) {
    for (const bool shuffled : {false, true}) {
      const Msa& used = msa;
      Msa shuffled_msa;
      const std::vector<Sequence>* seqs = &used.sequences;
      if (shuffled) {
        shuffled_msa = shuffle_columns(msa, 1000 + static_cast<std::uint64_t>(s));
        seqs = &shuffled_msa.sequences;
      }
      TrainConfig tc = base;
      tc.seed = static_cast<std::uint64_t>(s) + 1;
      tc.lambda_l1b2 = l1b2;
      ModelSpec spec;
      spec.n_hidden = hidden;
      const TrainResult result = train(*seqs, kAlphabetSize, spec, tc);
      const auto importance = feature_importance(result.model, *seqs);
      const auto features = locate_features(result.model);
      for (int mu = 0; mu < result.model.n_hidden(); ++mu)
        out << s << "\t" << (shuffled ? "shuffled" : "real") << "\trbm\t" << mu << "\t"
            << importance[static_cast<std::size_t>(mu)] << "\t"
            << to_string(features[static_cast<std::size_t>(mu)].cls) << "\n";
      // PCA baseline eigenvalues on the same data
      const PcaResult pca = pca_baseline(*seqs, kAlphabetSize, hidden);
      for (int k = 0; k < hidden; ++k)
        out << s << "\t" << (shuffled ? "shuffled" : "real") << "\tpca\t" << k << "\t"
            << pca.eigenvalues[static_cast<std::size_t>(k)] << "\t-\n";
      std::cout << "importance seed " << s << (shuffled ? " shuffled" : " real")
                << " done\n";
    }
  }
  write_provenance(out_path, cfg);
}

int run(int argc, char** argv) {
  CLI::App app{"lattice-protein RBM toolkit"};
  app.require_subcommand(1);
  int threads = default_threads();
  app.add_option("--threads", threads, "worker thread cap");

  World world;

  // folds
  auto* folds_cmd = app.add_subcommand("folds", "fold enumeration");
  auto* folds_enum = folds_cmd->add_subcommand("enumerate", "enumerate all folds");
  std::string convention = "octahedral", folds_out = "folds.txt";
  folds_enum->add_option("--convention", convention,
                         "octahedral | octahedral+reversal");
  folds_enum->add_option("--out", folds_out, "output fold file");

  // data
  auto* data_cmd = app.add_subcommand("data", "dataset operations");
  auto* data_gen = data_cmd->add_subcommand("generate", "Monte-Carlo MSA generation");
  std::uint32_t target_fold = 0;
  int n_seq = 36000;
  double threshold = 0.995;
  McConfig mc;
  std::uint64_t seed = 1;
  std::string msa_out = "msa.txt";
  data_gen->add_option("--folds", world.folds_path, "fold file")->required();
  data_gen->add_option("--mj", world.mj_path, "MJ potential file");
  data_gen->add_option("--target-fold", target_fold, "target fold index");
  data_gen->add_option("--n", n_seq, "number of sequences");
  data_gen->add_option("--threshold", threshold, "p_nat acceptance threshold");
  data_gen->add_option("--chains", mc.n_chains, "independent chains");
  data_gen->add_option("--burn-in", mc.burn_in_sweeps, "burn-in sweeps");
  data_gen->add_option("--thin", mc.thin_sweeps, "sweeps between samples");
  data_gen->add_option("--temperature", mc.temperature, "sampling temperature");
  data_gen->add_option("--seed", seed, "RNG seed");
  data_gen->add_option("--out", msa_out, "output MSA file");

  auto* data_shuffle = data_cmd->add_subcommand("shuffle", "column-shuffle an MSA");
  std::string msa_in;
  data_shuffle->add_option("--in", msa_in, "input MSA")->required();
  data_shuffle->add_option("--seed", seed, "RNG seed");
  data_shuffle->add_option("--out", msa_out, "output MSA")->required();

  auto* data_split = data_cmd->add_subcommand("split", "train/test split");
  double fraction = 0.8;
  std::string out_train = "train.txt", out_test = "test.txt";
  data_split->add_option("--in", msa_in, "input MSA")->required();
  data_split->add_option("--fraction", fraction, "train fraction");
  data_split->add_option("--seed", seed, "RNG seed");
  data_split->add_option("--out-train", out_train, "train output");
  data_split->add_option("--out-test", out_test, "test output");

  // train
  auto* train_cmd = app.add_subcommand("train", "train an RBM");
  std::string train_msa_path, model_out = "model.json", potential = "drelu";
  int hidden = 100;
  TrainConfig tc;
  train_cmd->add_option("--msa", train_msa_path, "training MSA")->required();
  train_cmd->add_option("--hidden", hidden, "hidden units");
  train_cmd->add_option("--potential", potential, "bernoulli|quadratic|relu|drelu");
  train_cmd->add_option("--l1b2", tc.lambda_l1b2, "weight L1/L2 strength");
  train_cmd->add_option("--l2-fields", tc.lambda_field_l2, "field L2 strength");
  train_cmd->add_option("--epochs", tc.n_epochs, "epochs");
  train_cmd->add_option("--batch", tc.batch_size, "minibatch size");
  train_cmd->add_option("--chains", tc.n_chains, "persistent chains");
  train_cmd->add_option("--gibbs", tc.gibbs_steps, "Gibbs steps per update");
  train_cmd->add_option("--lr", tc.learning_rate, "learning rate");
  train_cmd->add_option("--seed", tc.seed, "RNG seed");
  train_cmd->add_option("--out", model_out, "output model file");

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "model evaluation");
  auto* eval_ll = eval_cmd->add_subcommand("likelihood", "AIS likelihood report");
  std::string model_path, eval_msa_path, eval_out;
  int ais_betas = 2000, ais_chains = 100;
  eval_ll->add_option("--model", model_path, "model file")->required();
  eval_ll->add_option("--msa", eval_msa_path, "evaluation MSA")->required();
  eval_ll->add_option("--ais-betas", ais_betas, "AIS interpolation steps");
  eval_ll->add_option("--ais-chains", ais_chains, "AIS chains");
  eval_ll->add_option("--seed", seed, "RNG seed");
  eval_ll->add_option("--out", eval_out, "output JSON (default stdout)");

  auto* eval_feat = eval_cmd->add_subcommand("features", "feature localization table");
  std::string feat_out = "features.tsv";
  eval_feat->add_option("--model", model_path, "model file")->required();
  eval_feat->add_option("--fold-file", world.folds_path, "fold file")->required();
  eval_feat->add_option("--mj", world.mj_path, "MJ potential file");
  eval_feat->add_option("--target", target_fold, "target fold index");
  eval_feat->add_option("--msa", eval_msa_path, "MSA for importances (optional)");
  eval_feat->add_option("--out", feat_out, "output TSV");

  auto* eval_sweep = eval_cmd->add_subcommand("sweep", "lambda or hidden-size sweep");
  std::string sweep_mode = "lambda", sweep_values, sweep_train, sweep_test,
              sweep_out = "sweep.tsv";
  double sweep_l1b2 = 0.025;
  eval_sweep->add_option("--mode", sweep_mode, "lambda | hidden");
  eval_sweep->add_option("--values", sweep_values, "comma-separated values")->required();
  eval_sweep->add_option("--msa", sweep_train, "training MSA")->required();
  eval_sweep->add_option("--test", sweep_test, "held-out MSA")->required();
  eval_sweep->add_option("--hidden", hidden, "hidden units (lambda mode)");
  eval_sweep->add_option("--l1b2", sweep_l1b2, "regularization (hidden mode)");
  eval_sweep->add_option("--epochs", tc.n_epochs, "epochs");
  eval_sweep->add_option("--batch", tc.batch_size, "minibatch size");
  eval_sweep->add_option("--chains", tc.n_chains, "persistent chains");
  eval_sweep->add_option("--gibbs", tc.gibbs_steps, "Gibbs steps per update");
  eval_sweep->add_option("--lr", tc.learning_rate, "learning rate");
  eval_sweep->add_option("--ais-betas", ais_betas, "AIS interpolation steps");
  eval_sweep->add_option("--ais-chains", ais_chains, "AIS chains");
  eval_sweep->add_option("--seed", tc.seed, "RNG seed");
  eval_sweep->add_option("--out", sweep_out, "output TSV");

  // sample
  auto* sample_cmd = app.add_subcommand("sample", "sequence design");
  std::string clamp_arg, sample_out = "designs.txt", sample_report, training_path;
  int sample_n = 1000, power = 1;
  SampleConfig sc;
  sample_cmd->add_option("--model", model_path, "model file")->required();
  sample_cmd->add_option("--n", sample_n, "number of samples");
  sample_cmd->add_option("--clamp", clamp_arg, "unit=value hidden clamp");
  sample_cmd->add_option("--power", power, "sample from P(v)^power");
  sample_cmd->add_option("--burn-in", sc.burn_in, "burn-in Gibbs steps");
  sample_cmd->add_option("--thin", sc.thin, "Gibbs steps between samples");
  sample_cmd->add_option("--chains", sc.n_chains, "chains");
  sample_cmd->add_option("--seed", sc.seed, "RNG seed");
  sample_cmd->add_option("--out", sample_out, "output MSA");
  sample_cmd->add_option("--report", sample_report, "design report TSV");
  sample_cmd->add_option("--folds", world.folds_path, "fold file (for report)");
  sample_cmd->add_option("--mj", world.mj_path, "MJ potential file");
  sample_cmd->add_option("--target", target_fold, "target fold (for report)");
  sample_cmd->add_option("--training", training_path, "training MSA (for novelty)");

  // report
  auto* report_cmd = app.add_subcommand("report", "figure/table data exports");
  auto* rep_imp = report_cmd->add_subcommand(
      "importance", "feature importance, real vs shuffled (RBM + PCA)");
  std::string rep_out = "importance.tsv";
  int n_seeds = 5;
  rep_imp->add_option("--msa", train_msa_path, "training MSA")->required();
  rep_imp->add_option("--hidden", hidden, "hidden units");
  rep_imp->add_option("--l1b2", tc.lambda_l1b2, "regularization");
  rep_imp->add_option("--seeds", n_seeds, "number of seeds");
  rep_imp->add_option("--epochs", tc.n_epochs, "epochs");
  rep_imp->add_option("--batch", tc.batch_size, "minibatch size");
  rep_imp->add_option("--chains", tc.n_chains, "persistent chains");
  rep_imp->add_option("--gibbs", tc.gibbs_steps, "Gibbs steps per update");
  rep_imp->add_option("--out", rep_out, "output TSV");

  // JSON config support: values are appended as flags (overriding earlier ones)
  std::string config_path;
  app.add_option("--config", config_path, "JSON config overriding flags");

  app.parse(argc, argv);

  if (folds_enum->parsed()) {
    cmd_folds_enumerate(convention, folds_out);
  } else if (data_gen->parsed()) {
    cmd_data_generate(world, target_fold, n_seq, threshold, mc, seed, threads, msa_out);
  } else if (data_shuffle->parsed()) {
    cmd_data_shuffle(msa_in, seed, msa_out);
  } else if (data_split->parsed()) {
    cmd_data_split(msa_in, fraction, seed, out_train, out_test);
  } else if (train_cmd->parsed()) {
    cmd_train(train_msa_path, hidden, potential, tc, model_out);
  } else if (eval_ll->parsed()) {
    cmd_eval_likelihood(model_path, eval_msa_path, ais_betas, ais_chains, seed, eval_out);
  } else if (eval_feat->parsed()) {
    cmd_eval_features(world, model_path, target_fold, eval_msa_path, feat_out);
  } else if (eval_sweep->parsed()) {
    cmd_eval_sweep(sweep_mode, sweep_values, sweep_train, sweep_test, hidden,
                   sweep_l1b2, tc, ais_betas, ais_chains, sweep_out);
  } else if (sample_cmd->parsed()) {
    cmd_sample(world, model_path, sample_n, clamp_arg, power, sc, target_fold,
               training_path, sample_out, sample_report);
  } else if (rep_imp->parsed()) {
    cmd_report_importance(world, train_msa_path, hidden, tc.lambda_l1b2, n_seeds, tc,
                          rep_out);
  } else {
    throw CLI::CallForHelp();
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  // --config FILE: load JSON and append entries as flags so they override
  std::vector<std::string> args(argv + 1, argv + argc);
  for (std::size_t k = 0; k + 1 < args.size(); ++k) {
    if (args[k] == "--config") {
      std::ifstream in(args[k + 1]);
      if (!in) {
        std::cerr << "error: io: cannot read config file " << args[k + 1] << "\n";
        return 1;
      }
      try {
        const json cfg = json::parse(in);
        for (const auto& [key, value] : cfg.items()) {
          args.push_back("--" + key);
          args.push_back(value.is_string() ? value.get<std::string>() : value.dump());
        }
      } catch (const std::exception& e) {
        std::cerr << "error: validation: bad config JSON: " << e.what() << "\n";
        return 1;
      }
      break;
    }
  }
  std::vector<char*> cargs;
  cargs.push_back(argv[0]);
  for (auto& a : args) cargs.push_back(a.data());

  try {
    return run(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::ParseError& e) {
    CLI::App dummy;
    if (e.get_exit_code() != 0) {
      std::cerr << "error: usage: " << e.what() << "\n";
      return 1;
    }
    return dummy.exit(e);  // help/version requests
  } catch (const DivergenceError& e) {
    std::cerr << "error: divergence: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: io: " << e.what() << "\n";
    return 1;
  }
}
