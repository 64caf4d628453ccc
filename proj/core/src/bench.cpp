#include "gsr/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "gsr/bundle.hpp"
#include "gsr/errors.hpp"
#include "gsr/interp.hpp"
#include "gsr/metrics.hpp"
#include "gsr/spectrum.hpp"
#include "gsr/split.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace gsr {
namespace {

std::string fmt_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0.0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

void write_file(const fs::path& path, const std::string& content) {
  if (!path.parent_path().empty()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw format_error("cannot open " + path.string() + " for writing");
  out << content;
  if (!out) throw format_error("short write to " + path.string());
}

int derive_alpha(const Raster& source, const Raster& guide) {
  if (source.height < 1 || guide.height % source.height != 0 || guide.width % source.width != 0 ||
      guide.height / source.height != guide.width / source.width) {
    throw dimension_error("upsampler dispatch: guide dims are not an integer multiple of source dims");
  }
  return guide.height / source.height;
}

json jbu_json(const JbuParams& p) {
  return {{"sigma_spatial", p.sigma_spatial}, {"sigma_range", p.sigma_range}, {"window_radius", p.window_radius}};
}

json p2p_json(const P2pConfig& p) {
  return {{"lambda", p.lambda},
          {"step_size", p.step_size},
          {"step_decay", p.step_decay},
          {"max_iters", p.max_iters},
          {"plateau_window", p.plateau_window},
          {"plateau_tol", p.plateau_tol},
          {"seed", p.seed},
          {"hidden_dims", p.hidden_dims}};
}

json synth_json(const SynthParams& p, int count) {
  return {{"seed", p.seed},
          {"count", count},
          {"height", p.height},
          {"width", p.width},
          {"guide_channels", p.guide_channels},
          {"smooth_scale", p.smooth_scale},
          {"texture_gain", p.texture_gain},
          {"noise_sigma", p.noise_sigma},
          {"value_range", {p.value_range.first, p.value_range.second}},
          {"mix_target", p.mix_target},
          {"mix_independent", p.mix_independent}};
}

std::vector<double> json_double_list(const json& j, const char* key) {
  std::vector<double> out;
  if (j.is_number()) {
    out.push_back(j.get<double>());
    return out;
  }
  if (!j.is_array()) throw config_error(std::string("config: ") + key + " must be a number or an array");
  for (const auto& v : j) out.push_back(v.get<double>());
  return out;
}

Upsampler make_method_impl(const std::string& name, const BenchConfig& config,
                           std::vector<FitDiagnostics>* p2p_diag, long long* jbu_fallbacks) {
  if (name == "nearest") {
    return [](const Raster& s, const Raster& g) { return upsample_nearest(s, derive_alpha(s, g)); };
  }
  if (name == "bilinear") {
    return [](const Raster& s, const Raster& g) { return upsample_bilinear(s, derive_alpha(s, g)); };
  }
  if (name == "bicubic") {
    return [](const Raster& s, const Raster& g) { return upsample_bicubic(s, derive_alpha(s, g)); };
  }
  if (name == "jbu") {
    const JbuParams base = config.jbu;
    return [base, jbu_fallbacks](const Raster& s, const Raster& g) {
      JbuParams params = base;
      if (params.guide_mean.empty()) {
        const auto stats = channel_stats(g);
        params.guide_mean = stats.mean;
        params.guide_std.resize(stats.stddev.size());
        for (std::size_t c = 0; c < stats.stddev.size(); ++c) {
          params.guide_std[c] = stats.stddev[c] > 1e-12 ? stats.stddev[c] : 1.0;
        }
      }
      JbuResult result = jbu_upsample(s, g, params, derive_alpha(s, g));
      if (jbu_fallbacks) *jbu_fallbacks += result.spatial_fallbacks;
      return std::move(result.output);
    };
  }
  if (name == "p2p") {
    const P2pConfig fit_config = config.p2p;
    return [fit_config, p2p_diag](const Raster& s, const Raster& g) {
      FitResult result = p2p_fit_predict(s, g, derive_alpha(s, g), fit_config);
      if (p2p_diag) p2p_diag->push_back(std::move(result.diagnostics));
      return std::move(result.prediction);
    };
  }
  std::string roster;
  for (const auto& m : method_names()) roster += (roster.empty() ? "" : ", ") + m;
  throw config_error("unknown method \"" + name + "\"; valid methods: " + roster);
}

struct MethodRun {
  std::string name;
  std::vector<std::string> ids;  // scored sample ids, in test-split order
  std::vector<MetricReport> reports;
  std::vector<Raster> predictions;
};

std::string results_csv(const std::vector<MethodRun>& runs) {
  std::string csv = "method,sample_id,mae,rmse,psnr,ssim,peak_used\n";
  for (const auto& run : runs) {
    for (std::size_t i = 0; i < run.reports.size(); ++i) {
      const auto& r = run.reports[i];
      csv += run.name + "," + run.ids[i] + "," + fmt_double(r.mae) + "," + fmt_double(r.rmse) + "," +
             fmt_double(r.psnr) + "," + fmt_double(r.ssim) + "," + fmt_double(r.peak_used) + "\n";
    }
    if (!run.reports.empty()) {
      MetricReport agg;
      agg.peak_used = run.reports.front().peak_used;
      for (const auto& r : run.reports) {
        agg.mae += r.mae;
        agg.rmse += r.rmse;
        agg.psnr += r.psnr;
        agg.ssim += r.ssim;
      }
      const auto n = static_cast<double>(run.reports.size());
      csv += run.name + ",aggregate," + fmt_double(agg.mae / n) + "," + fmt_double(agg.rmse / n) + "," +
             fmt_double(agg.psnr / n) + "," + fmt_double(agg.ssim / n) + "," + fmt_double(agg.peak_used) + "\n";
    }
  }
  return csv;
}

std::string residual_csv_rows(const std::string& method, const ResidualBins& bins) {
  std::string csv;
  for (std::size_t b = 0; b + 1 < bins.bin_edges.size(); ++b) {
    const auto& summary = bins.bins[b];
    csv += method + "," + fmt_double(bins.bin_edges[b]) + "," + fmt_double(bins.bin_edges[b + 1]) + "," +
           std::to_string(summary.count);
    if (summary.count > 0) {
      csv += "," + fmt_double(summary.q1) + "," + fmt_double(summary.median) + "," + fmt_double(summary.q3) + "," +
             fmt_double(summary.mean);
    } else {
      csv += ",,,,";
    }
    csv += "\n";
  }
  return csv;
}

std::string spectrum_csv_rows(const std::string& method, const RadialSpectrum& profile) {
  std::string csv;
  for (std::size_t r = 0; r < profile.mean_magnitude.size(); ++r) {
    const double stddev = r < profile.std_dev.size() ? profile.std_dev[r] : 0.0;
    csv += method + "," + std::to_string(r) + "," + fmt_double(profile.mean_magnitude[r]) + "," +
           fmt_double(stddev) + "," + std::to_string(profile.count[r]) + "\n";
  }
  return csv;
}

std::vector<double> default_bin_edges(const std::vector<const Raster*>& refs) {
  float lo = 0.0f, hi = 0.0f;
  bool first = true;
  for (const Raster* r : refs) {
    for (const float v : r->values) {
      if (first) {
        lo = hi = v;
        first = false;
      } else {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
  }
  if (first) return {0.0, 1.0};
  double span = static_cast<double>(hi) - lo;
  if (span <= 0.0) span = 1.0;
  std::vector<double> edges(9);
  for (int i = 0; i <= 8; ++i) edges[static_cast<std::size_t>(i)] = lo + span * i / 8.0;
  return edges;
}

}  // namespace

const std::vector<std::string>& method_names() {
  static const std::vector<std::string> names{"nearest", "bilinear", "bicubic", "jbu", "p2p"};
  return names;
}

Upsampler make_method(const std::string& name, const BenchConfig& config) {
  return make_method_impl(name, config, nullptr, nullptr);
}

BenchConfig parse_config_text(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw config_error(std::string("config: invalid JSON: ") + e.what());
  }

  BenchConfig config;
  if (j.contains("alpha")) config.alpha = j["alpha"].get<int>();
  if (config.alpha < 1) throw config_error("config: alpha must be >= 1");

  if (j.contains("dataset")) {
    const auto& d = j["dataset"];
    if (d.contains("path")) config.dataset_path = fs::path(d["path"].get<std::string>());
    if (d.contains("synth")) {
      const auto& s = d["synth"];
      SynthParams params;
      params.alpha = config.alpha;
      if (s.contains("seed")) params.seed = s["seed"].get<std::uint64_t>();
      if (s.contains("height")) params.height = s["height"].get<int>();
      if (s.contains("width")) params.width = s["width"].get<int>();
      if (s.contains("alpha") && s["alpha"].get<int>() != config.alpha) {
        throw config_error("config: dataset.synth.alpha contradicts the top-level alpha");
      }
      if (s.contains("guide_channels")) params.guide_channels = s["guide_channels"].get<int>();
      if (s.contains("smooth_scale")) params.smooth_scale = s["smooth_scale"].get<int>();
      if (s.contains("texture_gain")) params.texture_gain = s["texture_gain"].get<double>();
      if (s.contains("noise_sigma")) params.noise_sigma = json_double_list(s["noise_sigma"], "noise_sigma");
      if (s.contains("value_range")) {
        const auto range = s["value_range"];
        if (!range.is_array() || range.size() != 2) throw config_error("config: value_range must be [min, max]");
        params.value_range = {range[0].get<double>(), range[1].get<double>()};
      }
      if (s.contains("mix_target")) params.mix_target = json_double_list(s["mix_target"], "mix_target");
      if (s.contains("mix_independent")) {
        params.mix_independent = json_double_list(s["mix_independent"], "mix_independent");
      }
      config.synth = params;
      config.synth_count = s.value("count", 0);
      if (config.synth_count < 1) throw config_error("config: dataset.synth.count must be >= 1");
    }
  }
  if (config.dataset_path.has_value() == config.synth.has_value()) {
    throw config_error("config: exactly one of dataset.path or dataset.synth is required");
  }

  if (j.contains("methods")) config.methods = j["methods"].get<std::vector<std::string>>();
  if (config.methods.empty()) config.methods = method_names();
  for (const auto& m : config.methods) (void)make_method(m, config);  // validate names early

  if (j.contains("jbu")) {
    const auto& b = j["jbu"];
    if (b.contains("sigma_spatial")) config.jbu.sigma_spatial = b["sigma_spatial"].get<double>();
    if (b.contains("sigma_range")) config.jbu.sigma_range = b["sigma_range"].get<double>();
    if (b.contains("window_radius")) config.jbu.window_radius = b["window_radius"].get<int>();
  }
  if (j.contains("p2p")) {
    const auto& p = j["p2p"];
    if (p.contains("lambda")) config.p2p.lambda = p["lambda"].get<double>();
    if (p.contains("step_size")) config.p2p.step_size = p["step_size"].get<double>();
    if (p.contains("step_decay")) config.p2p.step_decay = p["step_decay"].get<double>();
    if (p.contains("max_iters")) config.p2p.max_iters = p["max_iters"].get<int>();
    if (p.contains("plateau_window")) config.p2p.plateau_window = p["plateau_window"].get<int>();
    if (p.contains("plateau_tol")) config.p2p.plateau_tol = p["plateau_tol"].get<double>();
    if (p.contains("seed")) config.p2p.seed = p["seed"].get<std::uint64_t>();
    if (p.contains("hidden_dims")) config.p2p.hidden_dims = p["hidden_dims"].get<std::vector<int>>();
    config.p2p.validate();
  }
  if (j.contains("split")) {
    const auto& s = j["split"];
    if (s.contains("ratios")) {
      const auto ratios = s["ratios"];
      if (!ratios.is_array() || ratios.size() != 3) throw config_error("config: split.ratios must have 3 entries");
      for (int i = 0; i < 3; ++i) config.split_ratios[static_cast<std::size_t>(i)] = ratios[i].get<double>();
    }
    if (s.contains("seed")) config.split_seed = s["seed"].get<std::uint64_t>();
  }
  if (j.contains("metrics")) {
    const auto& m = j["metrics"];
    if (m.contains("peak")) config.metrics_peak = m["peak"].get<double>();
    if (!(config.metrics_peak > 0.0)) throw config_error("config: metrics.peak must be > 0");
  }
  if (j.contains("residual")) {
    const auto& r = j["residual"];
    if (r.contains("bin_edges")) config.residual_bin_edges = json_double_list(r["bin_edges"], "bin_edges");
    if (r.contains("sample_count")) config.residual_sample_count = r["sample_count"].get<long long>();
    if (r.contains("seed")) config.residual_seed = r["seed"].get<std::uint64_t>();
  }
  if (j.contains("throughput")) {
    config.throughput_repeats = j["throughput"].value("repeats", 0);
  }
  if (j.contains("spectrum")) {
    config.emit_spectrum = j["spectrum"].value("enabled", false);
  }
  if (j.contains("output")) {
    const auto& o = j["output"];
    if (o.contains("dir")) config.out_dir = fs::path(o["dir"].get<std::string>());
    config.dump_predictions = o.value("dump_predictions", false);
  }
  return config;
}

BenchConfig load_config(const fs::path& config_path) {
  std::ifstream in(config_path);
  if (!in) throw config_error("cannot open config " + config_path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

std::vector<PatchRecord> load_dataset(const BenchConfig& config) {
  std::vector<PatchRecord> records;
  if (config.dataset_path) {
    if (!fs::is_directory(*config.dataset_path)) {
      throw config_error("dataset path " + config.dataset_path->string() + " does not exist");
    }
    for (const auto& id : list_bundle_ids(*config.dataset_path)) {
      records.push_back(read_bundle(*config.dataset_path / id));
    }
    if (records.empty()) throw config_error("dataset path " + config.dataset_path->string() + " holds no bundles");
  } else {
    records = gen_dataset(*config.synth, config.synth_count);
  }
  for (const auto& record : records) {
    if (record.alpha != config.alpha) {
      throw config_error("record " + record.id + " has alpha=" + std::to_string(record.alpha) +
                         " but the config says alpha=" + std::to_string(config.alpha));
    }
  }
  return records;
}

namespace {

struct RunOutputs {
  std::vector<MethodRun> runs;
  std::vector<std::string> failures;       // "method/id: what"
  std::vector<std::string> skipped;        // score mode: missing ids
  long long jbu_fallbacks = 0;
  std::vector<FitDiagnostics> p2p_diag;    // aligned with the p2p run's ids
  std::string residual_csv = "method,bin_lo,bin_hi,count,q1,median,q3,mean\n";
  std::string spectrum_csv = "method,radius,mean_mag,std,count\n";
  bool spectrum_written = false;
  std::string throughput_csv = "method,mpix_per_s,repeats\n";
  bool throughput_written = false;
};

void append_residual_bins(const BenchConfig& config, const MethodRun& run,
                          const std::vector<const Raster*>& refs, RunOutputs& outputs) {
  if (run.predictions.empty()) return;
  std::vector<Raster> ref_copies;
  ref_copies.reserve(refs.size());
  for (const Raster* r : refs) ref_copies.push_back(*r);
  const std::vector<double> edges =
      config.residual_bin_edges.empty() ? default_bin_edges(refs) : config.residual_bin_edges;
  const ResidualBins bins = residual_bins(run.predictions, ref_copies, edges, config.residual_sample_count,
                                          config.residual_seed);
  outputs.residual_csv += residual_csv_rows(run.name, bins);
}

bool spectrum_capable(const Raster& target) {
  auto pow2 = [](int n) { return n >= 1 && (n & (n - 1)) == 0; };
  return pow2(target.height) && pow2(target.width);
}

void append_spectrum(const std::string& label, const std::vector<Raster>& maps, RunOutputs& outputs) {
  if (maps.empty()) return;
  std::vector<RadialSpectrum> profiles;
  profiles.reserve(maps.size());
  for (const auto& map : maps) {
    profiles.push_back(radial_profile(fft2d(map), map.height, map.width));
  }
  outputs.spectrum_csv += spectrum_csv_rows(label, aggregate_profiles(profiles));
  outputs.spectrum_written = true;
}

json manifest_json(const BenchConfig& config, const RunOutputs& outputs, const DatasetSplit& split,
                   std::size_t n_records, const std::string& mode) {
  json manifest;
  manifest["mode"] = mode;
  manifest["alpha"] = config.alpha;
  manifest["methods"] = config.methods;
  manifest["jbu"] = jbu_json(config.jbu);
  manifest["p2p"] = p2p_json(config.p2p);
  manifest["p2p"]["feature_standardization"] = "per-record guide z-score";
  manifest["p2p"]["output_calibration"] = "fixed affine from source mean/std";
  manifest["split"] = {{"ratios", config.split_ratios}, {"seed", config.split_seed},
                       {"train", split.train_ids.size()}, {"val", split.val_ids.size()},
                       {"test", split.test_ids.size()}};
  manifest["metrics"] = {{"peak", config.metrics_peak},
                         {"ssim", {{"window", "gaussian 11x11, sigma 1.5"}, {"aggregation", "valid windows only"}}}};
  manifest["interp"] = {{"bicubic_kernel", "keys a=-0.5 (catmull-rom)"}, {"edge_padding", "replicate"}};
  manifest["residual"] = {{"bin_edges", config.residual_bin_edges},
                          {"sample_count", config.residual_sample_count},
                          {"seed", config.residual_seed}};
  manifest["throughput"] = {{"repeats", config.throughput_repeats},
                            {"timing_scope", "inference only; records preloaded, disk I/O excluded"}};
  if (config.dataset_path) {
    manifest["dataset"] = {{"path", config.dataset_path->string()}};
  } else {
    manifest["dataset"] = {{"synth", synth_json(*config.synth, config.synth_count)}};
  }
  manifest["records"] = n_records;
  manifest["failures"] = outputs.failures;
  manifest["skipped"] = outputs.skipped;
  manifest["jbu_spatial_fallbacks"] = outputs.jbu_fallbacks;
  manifest["spectrum_emitted"] = outputs.spectrum_written;
  return manifest;
}

void write_outputs(const BenchConfig& config, RunOutputs& outputs, const DatasetSplit& split,
                   std::size_t n_records, const std::string& mode) {
  write_file(config.out_dir / "results.csv", results_csv(outputs.runs));
  write_file(config.out_dir / "residual_bins.csv", outputs.residual_csv);
  if (outputs.spectrum_written) write_file(config.out_dir / "spectrum.csv", outputs.spectrum_csv);
  if (outputs.throughput_written) write_file(config.out_dir / "throughput.csv", outputs.throughput_csv);
  write_file(config.out_dir / "manifest.json",
             manifest_json(config, outputs, split, n_records, mode).dump(2) + "\n");
}

void write_p2p_diagnostics(const BenchConfig& config, const MethodRun& run,
                           const std::vector<FitDiagnostics>& diagnostics) {
  for (std::size_t i = 0; i < diagnostics.size() && i < run.ids.size(); ++i) {
    std::string csv = "iteration,loss\n";
    const auto& curve = diagnostics[i].loss_curve;
    for (std::size_t it = 0; it < curve.size(); ++it) {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%zu,%.10g\n", it + 1, curve[it]);
      csv += buf;
    }
    write_file(config.out_dir / "p2p_diagnostics" / (run.ids[i] + ".csv"), csv);
  }
}

}  // namespace

int run_benchmark(const BenchConfig& config) {
  const std::vector<PatchRecord> records = load_dataset(config);
  std::vector<std::string> ids;
  ids.reserve(records.size());
  std::map<std::string, const PatchRecord*> by_id;
  for (const auto& record : records) {
    ids.push_back(record.id);
    by_id[record.id] = &record;
  }
  const DatasetSplit split = split_dataset(ids, config.split_ratios, config.split_seed);

  RunOutputs outputs;
  for (const auto& name : config.methods) {
    std::vector<FitDiagnostics> diag;
    Upsampler up = make_method_impl(name, config, name == "p2p" ? &diag : nullptr,
                                    name == "jbu" ? &outputs.jbu_fallbacks : nullptr);
    MethodRun run;
    run.name = name;
    std::vector<const Raster*> refs;
    for (const auto& id : split.test_ids) {
      const PatchRecord& record = *by_id.at(id);
      try {
        Raster prediction = up(record.source, record.guide);
        run.reports.push_back(evaluate(prediction, record.target, config.metrics_peak));
        run.ids.push_back(id);
        run.predictions.push_back(std::move(prediction));
        refs.push_back(&record.target);
      } catch (const std::exception& e) {
        outputs.failures.push_back(name + "/" + id + ": " + e.what());
      }
    }
    append_residual_bins(config, run, refs, outputs);
    if (config.emit_spectrum && !run.predictions.empty() && spectrum_capable(run.predictions.front())) {
      try {
        append_spectrum(run.name, run.predictions, outputs);
      } catch (const std::exception& e) {
        outputs.failures.push_back("spectrum/" + run.name + ": " + e.what());
      }
    }
    if (config.dump_predictions) {
      for (std::size_t i = 0; i < run.predictions.size(); ++i) {
        write_raster_bundle(run.predictions[i], run.ids[i],
                            config.out_dir / "predictions" / run.name / run.ids[i]);
      }
    }
    if (name == "p2p") write_p2p_diagnostics(config, run, diag);
    outputs.runs.push_back(std::move(run));
  }

  if (config.emit_spectrum && !split.test_ids.empty()) {
    std::vector<Raster> targets;
    for (const auto& id : split.test_ids) targets.push_back(by_id.at(id)->target);
    if (spectrum_capable(targets.front())) {
      try {
        append_spectrum("target", targets, outputs);
      } catch (const std::exception& e) {
        outputs.failures.push_back(std::string("spectrum/target: ") + e.what());
      }
    }
  }

  if (config.throughput_repeats > 0) {
    std::vector<PatchRecord> test_records;
    for (const auto& id : split.test_ids) test_records.push_back(*by_id.at(id));
    if (!test_records.empty()) {
      for (const auto& name : config.methods) {
        Upsampler up = make_method(name, config);
        const ThroughputResult result = throughput(
            [&up](const PatchRecord& r) { return up(r.source, r.guide); }, test_records,
            config.throughput_repeats);
        outputs.throughput_csv += name + "," + fmt_double(result.mpix_per_s) + "," +
                                  std::to_string(config.throughput_repeats) + "\n";
        outputs.throughput_written = true;
      }
    }
  }

  write_outputs(config, outputs, split, records.size(), "run");
  return outputs.failures.empty() ? 0 : 1;
}

int score_external(const fs::path& predictions_dir, const BenchConfig& config) {
  const std::vector<PatchRecord> records = load_dataset(config);
  std::vector<std::string> ids;
  std::map<std::string, const PatchRecord*> by_id;
  for (const auto& record : records) {
    ids.push_back(record.id);
    by_id[record.id] = &record;
  }
  const DatasetSplit split = split_dataset(ids, config.split_ratios, config.split_seed);

  RunOutputs outputs;
  MethodRun run;
  run.name = "external";
  std::vector<const Raster*> refs;
  for (const auto& id : split.test_ids) {
    const PatchRecord& record = *by_id.at(id);
    const fs::path bundle_dir = predictions_dir / id;
    if (!fs::exists(bundle_dir / "meta.json")) {
      outputs.skipped.push_back(id);
      continue;
    }
    try {
      Raster prediction = read_raster_bundle(bundle_dir);
      run.reports.push_back(evaluate(prediction, record.target, config.metrics_peak));
      run.ids.push_back(id);
      run.predictions.push_back(std::move(prediction));
      refs.push_back(&record.target);
    } catch (const std::exception& e) {
      outputs.failures.push_back("external/" + id + ": " + e.what());
    }
  }
  append_residual_bins(config, run, refs, outputs);
  if (config.emit_spectrum && !run.predictions.empty() && spectrum_capable(run.predictions.front())) {
    append_spectrum(run.name, run.predictions, outputs);
  }
  outputs.runs.push_back(std::move(run));

  write_outputs(config, outputs, split, records.size(), "score");
  for (const auto& id : outputs.skipped) {
    std::fprintf(stderr, "score: no prediction for test id %s, row skipped\n", id.c_str());
  }
  return outputs.failures.empty() && outputs.skipped.empty() ? 0 : 1;
}

int run_spectrum_tool(const fs::path& input_dir, const std::string& method, const BenchConfig& config,
                      const fs::path& out_csv) {
  if (!fs::is_directory(input_dir)) throw config_error("spectrum: input " + input_dir.string() + " does not exist");
  const auto ids = list_bundle_ids(input_dir);
  if (ids.empty()) throw config_error("spectrum: no bundles under " + input_dir.string());
  Upsampler up;
  if (method != "target") up = make_method(method, config);

  std::vector<RadialSpectrum> profiles;
  for (const auto& id : ids) {
    const PatchRecord record = read_bundle(input_dir / id);
    const Raster map = method == "target" ? record.target : up(record.source, record.guide);
    profiles.push_back(radial_profile(fft2d(map), map.height, map.width));
  }
  const RadialSpectrum aggregate = aggregate_profiles(profiles);
  std::string csv = "radius,mean_mag,std,count\n";
  for (std::size_t r = 0; r < aggregate.mean_magnitude.size(); ++r) {
    csv += std::to_string(r) + "," + fmt_double(aggregate.mean_magnitude[r]) + "," +
           fmt_double(aggregate.std_dev[r]) + "," + std::to_string(aggregate.count[r]) + "\n";
  }
  write_file(out_csv, csv);
  return 0;
}

}  // namespace gsr
