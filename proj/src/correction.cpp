// SPDX-FileCopyrightText: 2026 The pccolor Authors
// SPDX-License-Identifier: Apache-2.0

#include "pccolor/correction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pccolor/error.hpp"
#include "pccolor/parallel.hpp"

namespace pccolor {

ValidNeighborSet filter_valid_neighbors(const ColorPointCloud& target, const ColorPointCloud& source,
                                        const NeighborSet& ns, double delta_e_max) {
  if (ns.neighbors.empty()) throw Error(ErrorCode::InvalidConfig, "neighbor set is empty");
  ValidNeighborSet vn;
  vn.target = ns.target;
  const LabColor ref = rgb_to_lab(target.colors[ns.target]);
  for (const Neighbor& nb : ns.neighbors) {
    if (delta_e(ref, rgb_to_lab(source.colors[nb.index])) <= delta_e_max) vn.neighbors.push_back(nb);
  }
  if (vn.neighbors.empty()) {
    vn.neighbors.push_back(ns.neighbors.front());
    vn.fallback = true;
  }
  double sum = 0.0;
  for (const Neighbor& nb : vn.neighbors) sum += nb.distance;
  vn.d_avg = sum / static_cast<double>(vn.neighbors.size());
  return vn;
}

double kbi_delta(const Rgb& target_color, std::span<const Rgb> source_colors, const ValidNeighborSet& vn,
                 const KbiParams& params, Channel channel) {
  const auto ch = static_cast<std::size_t>(channel);
  const double inv_d2 = 1.0 / (params.sigma_d * params.sigma_d);
  const double inv_c2 = 1.0 / (params.sigma_c * params.sigma_c);
  const double c = target_color[ch];

  // log-weights first, then shift by their maximum before exponentiating
  double max_log = -std::numeric_limits<double>::infinity();
  for (const Neighbor& nb : vn.neighbors) {
    const double diff = source_colors[nb.index][ch] - c;
    max_log = std::max(max_log, -nb.distance * nb.distance * inv_d2 - diff * diff * inv_c2);
  }
  double num = 0.0;
  double den = 0.0;
  for (const Neighbor& nb : vn.neighbors) {
    const double diff = source_colors[nb.index][ch] - c;
    const double w = std::exp(-nb.distance * nb.distance * inv_d2 - diff * diff * inv_c2 - max_log);
    num += w * diff;
    den += w;
  }
  return num / den;
}

std::uint8_t round_clamp(double v) {
  const double r = std::round(v);
  return static_cast<std::uint8_t>(std::clamp(r, 0.0, 255.0));
}

std::pair<double, double> ModerateWeighting::weights(double d_avg) const {
  if (!(d_max > d_min)) return {1.0, 0.0};
  const double w2 = (d_avg - d_min) / (d_max - d_min);
  return {1.0 - w2, w2};
}

ModerateWeighting moderate_weighting(std::span<const std::size_t> members, std::span<const ValidNeighborSet> valid) {
  if (members.empty()) throw Error(ErrorCode::InvalidConfig, "moderate weighting needs at least one member");
  ModerateWeighting w{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (std::size_t i : members) {
    w.d_min = std::min(w.d_min, valid[i].d_avg);
    w.d_max = std::max(w.d_max, valid[i].d_avg);
  }
  return w;
}

HeWorkingSets build_he_working_sets(const GroupAssignment& assignment, HeMode mode,
                                    std::span<const std::size_t> nearest) {
  HeWorkingSets sets;
  for (std::size_t i = 0; i < assignment.labels.size(); ++i) {
    if (mode == HeMode::Moderate && assignment.labels[i] == Group::Distant) continue;
    sets.target.push_back(i);
    sets.source.push_back(nearest[i]);
  }
  return sets;
}

HeTables build_he_tables(std::span<const Rgb> target_colors, std::span<const Rgb> source_colors,
                         const HeWorkingSets& sets) {
  HeTables tables{};
  for (Channel ch : kChannels) {
    const ChannelCdf cdf_t = cumulative(build_histogram(target_colors, sets.target, ch));
    const ChannelCdf cdf_s = cumulative(build_histogram(source_colors, sets.source, ch));
    tables[static_cast<std::size_t>(ch)] = he_table(cdf_t, cdf_s);
  }
  return tables;
}

void correct_close(const CorrectionContext& ctx, std::span<const std::size_t> members, std::span<Rgb> out) {
  const std::span<const Rgb> src(ctx.source.colors);
  parallel_for(members.size(), [&](std::size_t m) {
    const std::size_t i = members[m];
    const Rgb& c = ctx.target_colors[i];
    Rgb result;
    for (Channel ch : kChannels) {
      const auto k = static_cast<std::size_t>(ch);
      result[k] = round_clamp(c[k] + kbi_delta(c, src, ctx.valid[i], ctx.params, ch));
    }
    out[i] = result;
  });
}

void correct_moderate(const CorrectionContext& ctx, std::span<const std::size_t> members,
                      const ModerateWeighting& weighting, const HeTables& tables, std::span<Rgb> out,
                      std::optional<std::pair<double, double>> fixed_weights) {
  const std::span<const Rgb> src(ctx.source.colors);
  parallel_for(members.size(), [&](std::size_t m) {
    const std::size_t i = members[m];
    const Rgb& c = ctx.target_colors[i];
    const auto [w1, w2] = fixed_weights ? *fixed_weights : weighting.weights(ctx.valid[i].d_avg);
    Rgb result;
    for (Channel ch : kChannels) {
      const auto k = static_cast<std::size_t>(ch);
      const double value = c[k];
      const double he = static_cast<double>(tables[k][c[k]]) - value;
      const double kbi = kbi_delta(c, src, ctx.valid[i], ctx.params, ch);
      // Evaluated left to right so w1 = 1 reproduces KBI and w2 = 1 reproduces HE exactly.
      result[k] = round_clamp(value + w1 * kbi + w2 * he);
    }
    out[i] = result;
  });
}

void correct_distant(std::span<const Rgb> target_colors, std::span<const std::size_t> members,
                     const HeTables& tables, std::span<Rgb> out) {
  for (std::size_t i : members) {
    const Rgb& c = target_colors[i];
    out[i] = Rgb{tables[0][c.r], tables[1][c.g], tables[2][c.b]};
  }
}

void PipelineConfig::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw Error(ErrorCode::InvalidConfig, std::string(name) + " must be positive");
  };
  if (kbi.k == 0) throw Error(ErrorCode::InvalidConfig, "k must be positive");
  if (!sigma_d_auto) positive(kbi.sigma_d, "sigma-d");
  positive(kbi.sigma_c, "sigma-c");
  positive(kbi.delta_e_max, "delta-e-max");
  positive(t_d, "t-d");
  if (!(t_r > 0.0 && t_r < 1.0)) throw Error(ErrorCode::InvalidConfig, "t-r must lie in (0, 1)");
  if (bins < 2) throw Error(ErrorCode::InvalidConfig, "bins must be at least 2");
  if (kbi_only && jkhe_only) throw Error(ErrorCode::InvalidConfig, "kbi-only and jkhe-only are exclusive");
  if (kbi_only && even_weights) throw Error(ErrorCode::InvalidConfig, "kbi-only and even-weights are exclusive");
}

double mean_spacing(const SpatialIndex& index, double fallback) {
  if (index.size() < 2) return fallback;
  std::vector<double> gaps(index.size());
  parallel_for(index.size(), [&](std::size_t i) { gaps[i] = index.k_nearest(index.point(i), 2)[1].distance; });
  double sum = 0.0;
  for (double g : gaps) sum += g;
  const double mean = sum / static_cast<double>(gaps.size());
  return mean > 0.0 ? mean : fallback;
}

PipelineResult run_pipeline(const ColorPointCloud& source, const ColorPointCloud& target,
                            const PipelineConfig& config) {
  config.validate();
  if (source.empty()) throw Error(ErrorCode::EmptyCloud, "source cloud is empty");
  if (target.empty()) throw Error(ErrorCode::EmptyCloud, "target cloud is empty");
  validate(source);
  validate(target);

  const SpatialIndex index = build_index(source);
  const DistanceDistribution dist =
      build_distance_distribution(target, index, config.bins, config.squared_distances);

  PipelineResult result;
  CorrectionReport& report = result.report;
  report.overlap = estimate_overlap(dist, config.t_d);

  PartitionKind requested = choose_partition(report.overlap, config.t_r);
  if (config.partition == PartitionOverride::ForceBi) requested = PartitionKind::Bi;
  if (config.partition == PartitionOverride::ForceTri) requested = PartitionKind::Tri;
  const GroupAssignment assignment = group_targets(dist, requested);
  report.partition = assignment.kind;
  report.thresholds = assignment.thresholds;

  KbiParams params = config.kbi;
  if (config.sigma_d_auto) params.sigma_d = mean_spacing(index, config.t_d);
  report.sigma_d_used = params.sigma_d;

  std::vector<ValidNeighborSet> valid(target.size());
  parallel_for(target.size(), [&](std::size_t i) {
    valid[i] = filter_valid_neighbors(target, source, k_nearest(index, i, target.positions[i], params.k),
                                      params.delta_e_max);
  });

  const std::vector<std::size_t> close = assignment.members(Group::Close);
  const std::vector<std::size_t> moderate = assignment.members(Group::Moderate);
  const std::vector<std::size_t> distant = assignment.members(Group::Distant);
  report.close = close.size();
  report.moderate = moderate.size();
  report.distant = distant.size();

  // Kernels read `current` and write `out`. In the default single-pass mode
  // `current` stays the original colors; sequential mode republishes each
  // group's output before the next group's histograms are built.
  std::vector<Rgb> out = target.colors;
  std::vector<Rgb> current = target.colors;
  const std::span<const Rgb> source_colors(source.colors);
  auto context = [&] { return CorrectionContext{source, current, valid, params}; };
  auto publish = [&] {
    if (config.sequential_groups) current = out;
  };

  std::vector<std::size_t> blended = moderate;
  if (config.jkhe_only) {
    blended.insert(blended.end(), close.begin(), close.end());
    std::sort(blended.begin(), blended.end());
  } else {
    correct_close(context(), close, out);
    publish();
  }

  if (!blended.empty()) {
    if (config.kbi_only) {
      correct_close(context(), blended, out);
    } else {
      const ModerateWeighting weighting = moderate_weighting(blended, valid);
      report.weighting = weighting;
      const HeTables tables =
          build_he_tables(current, source_colors, build_he_working_sets(assignment, HeMode::Moderate, dist.nearest));
      std::optional<std::pair<double, double>> fixed;
      if (config.even_weights) fixed = std::pair{0.5, 0.5};
      correct_moderate(context(), blended, weighting, tables, out, fixed);
    }
    publish();
  }

  if (!distant.empty()) {
    const HeTables tables =
        build_he_tables(current, source_colors, build_he_working_sets(assignment, HeMode::Distant, dist.nearest));
    correct_distant(current, distant, tables, out);
  }

  result.corrected.positions = target.positions;
  result.corrected.colors = std::move(out);
  return result;
}

}  // namespace pccolor
