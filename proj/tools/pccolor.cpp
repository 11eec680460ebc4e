// SPDX-FileCopyrightText: 2026 The pccolor Authors
// SPDX-License-Identifier: Apache-2.0

// Batch front-end: correct, compare, synth and metrics subcommands.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "pccolor/error.hpp"
#include "pccolor/ply.hpp"
#include "pccolor/runner.hpp"
#include "pccolor/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Files are written next to their destination and renamed into place only
// after every output of the command succeeded; otherwise all are removed.
class OutputSet {
 public:
  ~OutputSet() {
    std::error_code ec;
    for (const auto& [tmp, dst] : staged_) fs::remove(tmp, ec);
  }

  fs::path stage(const fs::path& dst) {
    fs::path tmp = dst;
    tmp += ".partial";
    staged_.emplace_back(tmp, dst);
    return tmp;
  }

  void commit() {
    for (const auto& [tmp, dst] : staged_) fs::rename(tmp, dst);
    staged_.clear();
  }

 private:
  std::vector<std::pair<fs::path, fs::path>> staged_;
};

void write_json(const json& j, const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw pccolor::Error(pccolor::ErrorCode::IoFailure, "cannot open " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw pccolor::Error(pccolor::ErrorCode::IoFailure, "cannot write " + path.string());
}

pccolor::PlyFormat parse_format(const std::string& s) {
  if (s == "ascii") return pccolor::PlyFormat::Ascii;
  if (s == "binary" || s == "binary_little_endian") return pccolor::PlyFormat::BinaryLittleEndian;
  throw pccolor::Error(pccolor::ErrorCode::InvalidConfig, "unknown format '" + s + "'");
}

std::array<double, 3> parse_triplet(const std::string& s, const char* name) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw pccolor::Error(pccolor::ErrorCode::InvalidSpec, std::string("bad value for --") + name + ": " + s);
    }
  }
  if (v.size() == 1) return {v[0], v[0], v[0]};
  if (v.size() == 3) return {v[0], v[1], v[2]};
  throw pccolor::Error(pccolor::ErrorCode::InvalidSpec, std::string("--") + name + " takes one value or three");
}

struct ConfigOptions {
  std::string method = "ours";
  std::size_t k = 8;
  std::string sigma_d = "auto";
  double sigma_c = 25.0;
  double delta_e_max = 20.0;
  double t_r = 0.45;
  double t_d = 0.003;
  std::size_t bins = 1024;
  bool force_bi = false;
  bool force_tri = false;
  bool even_weights = false;
  bool kbi_only = false;
  bool jkhe_only = false;
  bool sequential_groups = false;
  bool squared_distances = false;
  bool pooled_cpsnr = false;
  bool record_runtime = false;

  void attach(CLI::App* app, bool with_method) {
    if (with_method) app->add_option("--method", method, "ours, nn, knn, hm or agl")->capture_default_str();
    app->add_option("--k", k, "neighbor count")->capture_default_str();
    app->add_option("--sigma-d", sigma_d, "bilateral distance scale in meters, or 'auto'")->capture_default_str();
    app->add_option("--sigma-c", sigma_c, "bilateral color scale")->capture_default_str();
    app->add_option("--delta-e-max", delta_e_max, "CIE76 validity threshold")->capture_default_str();
    app->add_option("--t-r", t_r, "overlap-rate threshold for tri-group partition")->capture_default_str();
    app->add_option("--t-d", t_d, "overlap vote distance in meters")->capture_default_str();
    app->add_option("--bins", bins, "distance histogram bins")->capture_default_str();
    auto* bi = app->add_flag("--force-bi", force_bi, "always use the bi-group partition");
    auto* tri = app->add_flag("--force-tri", force_tri, "always use the tri-group partition");
    bi->excludes(tri);
    app->add_flag("--even-weights", even_weights, "blend KBI and HE with w1 = w2 = 0.5");
    app->add_flag("--kbi-only", kbi_only, "correct the moderate group with KBI only");
    app->add_flag("--jkhe-only", jkhe_only, "correct close and moderate groups with JKHE");
    app->add_flag("--sequential-groups", sequential_groups, "later groups see earlier corrected colors");
    app->add_flag("--squared-distances", squared_distances, "threshold squared nearest distances");
    app->add_flag("--pooled-cpsnr", pooled_cpsnr, "PSNR of the mean CMSE instead of mean per-point PSNR");
    app->add_flag("--record-runtime", record_runtime, "fill runtime_ms in reports");
  }

  pccolor::RunConfig build() const {
    pccolor::RunConfig cfg;
    cfg.method = pccolor::parse_method(method);
    auto& p = cfg.pipeline;
    p.kbi.k = k;
    if (sigma_d == "auto") {
      p.sigma_d_auto = true;
    } else {
      p.sigma_d_auto = false;
      try {
        p.kbi.sigma_d = std::stod(sigma_d);
      } catch (const std::exception&) {
        throw pccolor::Error(pccolor::ErrorCode::InvalidConfig, "--sigma-d must be a number or 'auto'");
      }
    }
    p.kbi.sigma_c = sigma_c;
    p.kbi.delta_e_max = delta_e_max;
    p.t_r = t_r;
    p.t_d = t_d;
    p.bins = bins;
    if (force_bi && force_tri) throw pccolor::Error(pccolor::ErrorCode::InvalidConfig, "force-bi and force-tri are exclusive");
    p.partition = force_bi ? pccolor::PartitionOverride::ForceBi
                           : (force_tri ? pccolor::PartitionOverride::ForceTri : pccolor::PartitionOverride::Auto);
    p.even_weights = even_weights;
    p.kbi_only = kbi_only;
    p.jkhe_only = jkhe_only;
    p.sequential_groups = sequential_groups;
    p.squared_distances = squared_distances;
    p.validate();
    cfg.cpsnr = pooled_cpsnr ? pccolor::CpsnrMode::Pooled : pccolor::CpsnrMode::PerPoint;
    cfg.record_runtime = record_runtime;
    return cfg;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Color correction for aligned color point cloud pairs"};
  app.require_subcommand(1);

  // correct
  auto* correct = app.add_subcommand("correct", "correct the target colors against the aligned source");
  std::string c_source, c_target, c_output, c_report, c_format = "binary";
  ConfigOptions c_opts;
  correct->add_option("source", c_source, "aligned source PLY")->required();
  correct->add_option("target", c_target, "target PLY")->required();
  correct->add_option("-o,--output", c_output, "corrected PLY")->required();
  correct->add_option("-r,--report", c_report, "report JSON")->required();
  correct->add_option("--format", c_format, "ascii or binary")->capture_default_str();
  c_opts.attach(correct, true);

  // compare
  auto* compare = app.add_subcommand("compare", "CMD/CPSNR table for several methods");
  std::string m_source, m_target, m_methods = "ours,nn,knn,hm,agl", m_json;
  ConfigOptions m_opts;
  compare->add_option("source", m_source, "aligned source PLY")->required();
  compare->add_option("target", m_target, "target PLY")->required();
  compare->add_option("--methods", m_methods, "comma separated method list")->capture_default_str();
  compare->add_option("--json", m_json, "also write the table as JSON");
  m_opts.attach(compare, false);

  // synth
  auto* synth = app.add_subcommand("synth", "generate a seeded synthetic aligned pair");
  pccolor::SynthSpec spec;
  std::string s_bias = "0", s_gain = "1", s_out = ".", s_format = "binary";
  synth->add_option("--points", spec.points, "points per cloud")->capture_default_str();
  synth->add_option("--overlap", spec.overlap, "overlap fraction in (0, 1]")->capture_default_str();
  synth->add_option("--bias", s_bias, "color bias, one value or r,g,b")->capture_default_str();
  synth->add_option("--gain", s_gain, "color gain, one value or r,g,b")->capture_default_str();
  synth->add_option("--noise", spec.noise_std, "gaussian color noise std")->capture_default_str();
  synth->add_option("--seed", spec.seed, "random seed")->capture_default_str();
  synth->add_option("--extent", spec.extent, "patch side in meters")->capture_default_str();
  synth->add_option("--out-dir", s_out, "directory for source.ply, target.ply, truth.json")->capture_default_str();
  synth->add_option("--format", s_format, "ascii or binary")->capture_default_str();

  // metrics
  auto* metrics = app.add_subcommand("metrics", "CMD and CPSNR of a corrected cloud against the source");
  std::string e_corrected, e_source, e_json;
  bool e_pooled = false;
  metrics->add_option("corrected", e_corrected, "corrected PLY")->required();
  metrics->add_option("source", e_source, "aligned source PLY")->required();
  metrics->add_flag("--pooled-cpsnr", e_pooled, "PSNR of the mean CMSE");
  metrics->add_option("--json", e_json, "write the metrics to this file instead of stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (correct->parsed()) {
      const auto cfg = c_opts.build();
      const auto format = parse_format(c_format);
      const auto source = pccolor::read_ply(c_source);
      const auto target = pccolor::read_ply(c_target);
      const auto run = pccolor::run_method(source, target, cfg);
      OutputSet outputs;
      pccolor::write_ply(run.corrected, outputs.stage(c_output), format);
      write_json(run.report, outputs.stage(c_report));
      outputs.commit();
    } else if (compare->parsed()) {
      auto cfg = m_opts.build();
      std::vector<pccolor::Method> methods;
      std::stringstream ss(m_methods);
      for (std::string name; std::getline(ss, name, ',');) methods.push_back(pccolor::parse_method(name));
      const auto source = pccolor::read_ply(m_source);
      const auto target = pccolor::read_ply(m_target);
      const json table = pccolor::compare_methods(source, target, methods, cfg);
      if (!m_json.empty()) {
        OutputSet outputs;
        write_json(table, outputs.stage(m_json));
        outputs.commit();
      }
      std::cout << pccolor::format_compare_table(table);
    } else if (synth->parsed()) {
      spec.bias = parse_triplet(s_bias, "bias");
      spec.gain = parse_triplet(s_gain, "gain");
      const auto format = parse_format(s_format);
      const auto pair = pccolor::generate_pair(spec);
      fs::create_directories(s_out);
      const fs::path dir(s_out);
      OutputSet outputs;
      pccolor::write_ply(pair.source, outputs.stage(dir / "source.ply"), format);
      pccolor::write_ply(pair.target, outputs.stage(dir / "target.ply"), format);
      write_json(pccolor::truth_json(spec, pair), outputs.stage(dir / "truth.json"));
      outputs.commit();
    } else if (metrics->parsed()) {
      const auto corrected = pccolor::read_ply(e_corrected);
      const auto source = pccolor::read_ply(e_source);
      const json j = pccolor::metrics_json(
          pccolor::evaluate(corrected, source, e_pooled ? pccolor::CpsnrMode::Pooled : pccolor::CpsnrMode::PerPoint));
      if (e_json.empty()) {
        std::cout << j.dump(2) << '\n';
      } else {
        OutputSet outputs;
        write_json(j, outputs.stage(e_json));
        outputs.commit();
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "pccolor: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
