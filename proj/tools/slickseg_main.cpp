// Batch front end: segment images, generate synthetic corpora, evaluate
// masks against ground truth, and sweep parameter grids.
//
// Exit codes: 0 success (segment: converged), 1 error, 2 iteration budget
// exhausted without convergence.

#include "slickseg/config.hpp"
#include "slickseg/log.hpp"
#include "slickseg/metrics.hpp"
#include "slickseg/pipeline.hpp"
#include "slickseg/pnm.hpp"
#include "slickseg/synth.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace fs = std::filesystem;
using namespace slickseg;

namespace {

struct CommonOpts {
  std::string config_path;
  std::string init_rect;
  std::string init_circle;
  std::string model;
  std::string out_dir = ".";
  bool force = false;
};

void add_config_opts(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--config", o.config_path, "flat key=value config file");
  cmd->add_option("--init-rect", o.init_rect,
                  "initialization rectangle x0,y0,x1,y1");
  cmd->add_option("--init-circle", o.init_circle,
                  "initialization circle cx,cy,r");
  cmd->add_option("--model", o.model, "distribution model: exp|weibull|gamma")
      ->check(CLI::IsMember({"exp", "weibull", "gamma"}));
}

SegmentationConfig effective_config(const CommonOpts& o) {
  SegmentationConfig cfg;
  if (!o.config_path.empty()) cfg = load_config(o.config_path);
  if (!o.init_rect.empty() && !o.init_circle.empty())
    throw std::runtime_error("give either --init-rect or --init-circle, not both");
  if (!o.init_rect.empty()) cfg.init = parse_shape("rect:" + o.init_rect);
  if (!o.init_circle.empty()) cfg.init = parse_shape("circle:" + o.init_circle);
  if (!o.model.empty()) apply_config_pair(cfg, "model", o.model);
  return cfg;
}

fs::path prepare_output(const std::string& dir) {
  fs::path p(dir);
  if (!p.empty()) fs::create_directories(p);
  return p;
}

void refuse_overwrite(const std::vector<fs::path>& targets, bool force) {
  if (force) return;
  for (const auto& t : targets)
    if (fs::exists(t))
      throw std::runtime_error("refusing to overwrite " + t.string() +
                               " (use --force)");
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

RealField binarize(const RealField& f) {
  RealField b(f.rows(), f.cols());
  for (Eigen::Index i = 0; i < f.size(); ++i) b(i) = f(i) > 0 ? 1.0 : 0.0;
  return b;
}

std::string scene_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "scene%03zu", index);
  return buf;
}

GrayImage quantize16(const RealField& f) {
  GrayImage img;
  img.width = static_cast<int>(f.cols());
  img.height = static_cast<int>(f.rows());
  img.maxval = 65535;
  const Real top = f.maxCoeff();
  const Real scale = top > 0 ? 65535.0 / top : 0.0;
  img.pixels.reserve(std::size_t(f.size()));
  for (Eigen::Index i = 0; i < f.size(); ++i)
    img.pixels.push_back(
        static_cast<std::uint16_t>(std::lround(std::max<Real>(0, f(i)) * scale)));
  return img;
}

// --- segment ---------------------------------------------------------------

int cmd_segment(const std::string& image_path, const CommonOpts& o) {
  const SegmentationConfig cfg = effective_config(o);
  const GrayImage img = read_pgm(image_path);
  const RealField I = to_field(img);

  const fs::path out = prepare_output(o.out_dir);
  const std::string stem = fs::path(image_path).stem().string();
  const fs::path mask_path = out / (stem + "_mask.pgm");
  const fs::path overlay_path = out / (stem + "_overlay.ppm");
  const fs::path trace_path = out / (stem + "_trace.csv");
  const fs::path summary_path = out / (stem + "_summary.txt");
  refuse_overwrite({mask_path, overlay_path, trace_path, summary_path}, o.force);

  std::vector<EnergyBreakdown> trace;
  const SegmentationResult result = run(I, cfg, &trace);

  write_mask(result.oil_mask, mask_path.string());
  write_overlay(I, result.contour, overlay_path.string());

  std::ostringstream csv;
  csv << "iter,fitting,contour,distance,total\n";
  for (std::size_t i = 0; i < trace.size(); ++i)
    csv << i << "," << format_real(trace[i].fitting) << ","
        << format_real(trace[i].contour) << "," << format_real(trace[i].distance)
        << "," << format_real(trace[i].total) << "\n";
  write_text(trace_path, csv.str());

  std::ostringstream summary;
  summary << dump_config(cfg);
  summary << "result_converged = " << (result.converged ? "true" : "false")
          << "\n"
          << "result_iterations = " << result.iterations_used << "\n"
          << "result_fitting = " << format_real(result.final_energy.fitting)
          << "\n"
          << "result_contour = " << format_real(result.final_energy.contour)
          << "\n"
          << "result_distance = " << format_real(result.final_energy.distance)
          << "\n"
          << "result_total = " << format_real(result.final_energy.total) << "\n"
          << "result_region_mean_1 = " << format_real(result.region_means.first)
          << "\n"
          << "result_region_mean_2 = "
          << format_real(result.region_means.second) << "\n"
          << "result_oil_pixels = "
          << static_cast<long long>(result.oil_mask.sum()) << "\n"
          << "result_contour_pixels = " << result.contour.size() << "\n";
  write_text(summary_path, summary.str());

  if (!result.converged) {
    log_info("segment: iteration budget exhausted before convergence");
    return 2;
  }
  return 0;
}

// --- synth -----------------------------------------------------------------

int cmd_synth(const std::string& spec_path, const CommonOpts& o,
              long long seed_override) {
  std::vector<SceneSpec> scenes = load_scene_file(spec_path);
  if (seed_override >= 0)
    for (std::size_t i = 0; i < scenes.size(); ++i)
      scenes[i].seed = std::uint64_t(seed_override) + i;

  const fs::path out = prepare_output(o.out_dir);
  std::vector<fs::path> targets;
  for (std::size_t i = 0; i < scenes.size(); ++i) {
    targets.push_back(out / (scene_name(i) + ".pgm"));
    targets.push_back(out / (scene_name(i) + "_truth.pgm"));
  }
  refuse_overwrite(targets, o.force);

  for (std::size_t i = 0; i < scenes.size(); ++i) {
    const Scene scene = generate(scenes[i]);
    write_pgm(quantize16(scene.intensity), targets[2 * i].string());
    write_mask(scene.truth, targets[2 * i + 1].string());
  }
  log_info("synth: wrote " + std::to_string(2 * scenes.size()) + " files to " +
           out.string());
  return 0;
}

// --- eval ------------------------------------------------------------------

std::vector<std::string> pgm_names(const fs::path& dir) {
  if (!fs::is_directory(dir))
    throw std::runtime_error(dir.string() + " is not a directory");
  std::vector<std::string> names;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".pgm")
      names.push_back(entry.path().filename().string());
  std::sort(names.begin(), names.end());
  return names;
}

int cmd_eval(const std::string& mask_dir, const std::string& truth_dir,
             const CommonOpts& o) {
  const auto masks = pgm_names(mask_dir);
  const auto truths = pgm_names(truth_dir);
  std::vector<std::string> unpaired;
  for (const auto& n : masks)
    if (!std::binary_search(truths.begin(), truths.end(), n))
      unpaired.push_back(mask_dir + "/" + n);
  for (const auto& n : truths)
    if (!std::binary_search(masks.begin(), masks.end(), n))
      unpaired.push_back(truth_dir + "/" + n);
  if (!unpaired.empty()) {
    std::string msg = "unpaired files:";
    for (const auto& n : unpaired) msg += " " + n;
    throw std::runtime_error(msg);
  }
  if (masks.empty()) throw std::runtime_error("no .pgm files to evaluate");

  const fs::path out = prepare_output(o.out_dir);
  const fs::path csv_path = out / "eval.csv";
  refuse_overwrite({csv_path}, o.force);

  std::ostringstream csv;
  csv << "name,accuracy,precision,tp,fp,tn,fn,accuracy_sd,precision_sd\n";
  std::vector<Real> accs, precs;
  ConfusionCounts totals;
  for (const auto& name : masks) {
    const RealField mask = binarize(to_field(read_pgm(mask_dir + "/" + name)));
    const RealField truth = binarize(to_field(read_pgm(truth_dir + "/" + name)));
    const ConfusionCounts c = confusion(mask, truth);
    const Real acc = accuracy(c), prec = precision(c);
    accs.push_back(acc);
    precs.push_back(prec);
    totals.tp += c.tp;
    totals.fp += c.fp;
    totals.tn += c.tn;
    totals.fn += c.fn;
    csv << name << "," << format_real(acc) << "," << format_real(prec) << ","
        << c.tp << "," << c.fp << "," << c.tn << "," << c.fn << ",,\n";
  }
  const BatchStats acc_stats = batch_stats(accs);
  const BatchStats prec_stats = batch_stats(precs);
  csv << "summary," << format_real(acc_stats.mean) << ","
      << format_real(prec_stats.mean) << "," << totals.tp << "," << totals.fp
      << "," << totals.tn << "," << totals.fn << ","
      << format_real(acc_stats.stddev) << "," << format_real(prec_stats.stddev)
      << "\n";
  write_text(csv_path, csv.str());
  std::printf("%s", csv.str().c_str());
  return 0;
}

// --- sweep -----------------------------------------------------------------

struct CorpusImage {
  std::string name;
  RealField intensity;
  RealField truth;
};

std::vector<CorpusImage> load_corpus(const std::string& dir) {
  std::vector<CorpusImage> corpus;
  for (const auto& name : pgm_names(dir)) {
    if (name.size() > 10 && name.substr(name.size() - 10) == "_truth.pgm")
      continue;
    const std::string stem = name.substr(0, name.size() - 4);
    const fs::path truth_path = fs::path(dir) / (stem + "_truth.pgm");
    if (!fs::exists(truth_path))
      throw std::runtime_error("missing ground truth for " + dir + "/" + name);
    CorpusImage img;
    img.name = name;
    img.intensity = to_field(read_pgm(dir + "/" + name));
    img.truth = binarize(to_field(read_pgm(truth_path.string())));
    corpus.push_back(std::move(img));
  }
  if (corpus.empty())
    throw std::runtime_error("no image/truth pairs found in " + dir);
  return corpus;
}

int cmd_sweep(const std::string& grid_path, const std::string& corpus_dir,
                   const CommonOpts& o, int jobs) {
  const std::vector<SweepCell> cells = load_grid_file(grid_path);
  const std::vector<CorpusImage> corpus = load_corpus(corpus_dir);
  const SegmentationConfig base = effective_config(o);

  const fs::path out = prepare_output(o.out_dir);
  const fs::path csv_path = out / "sweep.csv";
  refuse_overwrite({csv_path}, o.force);

  const std::size_t n_runs = cells.size() * corpus.size();
  std::vector<Real> acc(n_runs, 0.0);
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n_runs) return;
      const SweepCell& cell = cells[i / corpus.size()];
      const CorpusImage& img = corpus[i % corpus.size()];
      SegmentationConfig cfg = base;
      cfg.gamma1 = cell.gamma1;
      cfg.gamma2 = cell.gamma2;
      cfg.nu = cell.nu;
      cfg.model = cell.model;
      const SegmentationResult res = run(img.intensity, cfg);
      acc[i] = accuracy(confusion(res.oil_mask, img.truth));
    }
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::ostringstream csv;
  csv << "cell,gamma1,gamma2,nu,model,mean_accuracy,accuracy_sd\n";
  for (std::size_t c = 0; c < cells.size(); ++c) {
    std::vector<Real> cell_acc(acc.begin() + c * corpus.size(),
                               acc.begin() + (c + 1) * corpus.size());
    const BatchStats stats = batch_stats(cell_acc);
    csv << c << "," << format_real(cells[c].gamma1) << ","
        << format_real(cells[c].gamma2) << "," << format_real(cells[c].nu)
        << "," << model_name(cells[c].model.kind) << ","
        << format_real(stats.mean) << "," << format_real(stats.stddev) << "\n";
  }
  write_text(csv_path, csv.str());
  std::printf("%s", csv.str().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"probability-distribution-driven level-set segmentation for "
               "speckled grayscale imagery"};
  app.require_subcommand(1);

  CommonOpts seg_opts, synth_opts, eval_opts, sweep_opts;
  std::string image_path, spec_path, mask_dir, truth_dir, grid_path, corpus_dir;
  long long seed_override = -1;
  int jobs = 1;

  CLI::App* seg = app.add_subcommand("segment", "segment one grayscale image");
  seg->add_option("image", image_path, "input PGM image")->required();
  add_config_opts(seg, seg_opts);
  seg->add_option("--out", seg_opts.out_dir, "output directory");
  seg->add_flag("--force", seg_opts.force, "overwrite existing outputs");

  CLI::App* synth = app.add_subcommand("synth", "generate synthetic scenes");
  synth->add_option("spec", spec_path, "scene spec file")->required();
  synth->add_option("--out", synth_opts.out_dir, "output directory");
  synth->add_option("--seed", seed_override,
                    "override base seed (scene i gets seed+i)");
  synth->add_flag("--force", synth_opts.force, "overwrite existing outputs");

  CLI::App* eval = app.add_subcommand("eval", "score masks against truth");
  eval->add_option("masks", mask_dir, "directory of mask PGMs")->required();
  eval->add_option("truth", truth_dir, "directory of truth PGMs")->required();
  eval->add_option("--out", eval_opts.out_dir, "output directory");
  eval->add_flag("--force", eval_opts.force, "overwrite existing outputs");

  CLI::App* sweep = app.add_subcommand("sweep", "parameter grid over a corpus");
  sweep->add_option("grid", grid_path, "grid file of parameter cells")
      ->required();
  sweep->add_option("corpus", corpus_dir,
                    "directory of X.pgm + X_truth.pgm pairs")
      ->required();
  add_config_opts(sweep, sweep_opts);
  sweep->add_option("--out", sweep_opts.out_dir, "output directory");
  sweep->add_option("--jobs", jobs, "concurrent segmentation runs");
  sweep->add_flag("--force", sweep_opts.force, "overwrite existing outputs");

  CLI11_PARSE(app, argc, argv);

  try {
    if (seg->parsed()) return cmd_segment(image_path, seg_opts);
    if (synth->parsed()) return cmd_synth(spec_path, synth_opts, seed_override);
    if (eval->parsed()) return cmd_eval(mask_dir, truth_dir, eval_opts);
    if (sweep->parsed())
      return cmd_sweep(grid_path, corpus_dir, sweep_opts, jobs);
  } catch (const std::exception& e) {
    log_error(e.what());
    return 1;
  }
  return 1;
}
