#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <sstream>

#include "kerrtrack/errors.hpp"
#include "kerrtrack/portrait.hpp"

namespace kerrtrack {

namespace {

// Largest move of a root in x = sqrt(P) between two samples that still
// counts as continuous.
constexpr double kMaxJump = 0.25;

struct Sample {
  double s = 0.0;
  bool has_tracked = false;
  double x_tracked = 0.0;
  double det_tracked = 0.0;
  double pole_margin = 0.0;
  std::vector<double> untracked[2];  // indexed by sector
  std::size_t all_count[2] = {0, 0};
};

Sector sector_at(int i) { return i == 0 ? Sector::alpha0 : Sector::alphaPi; }

int sign_of(double v, double zero) {
  if (std::abs(v) <= zero) return 0;
  return v > 0.0 ? 1 : -1;
}

std::vector<double> interior_roots(const Cubic& c) {
  std::vector<double> out;
  if (c[0] == 0.0 && c[1] == 0.0 && c[2] == 0.0 && c[3] == 0.0) return out;
  for (const RealRoot& r : real_cubic_roots(c)) {
    if (r.x > 1e-9 && r.x < 1.0 - 1e-9) out.push_back(r.x);
  }
  return out;
}

// With compensation the target is a root by construction. Without it the
// tracked root is the one continued from the start of the window.
bool target_is_root(const TrackingScenario& sc) {
  return sc.compensate_kerr || sc.params.lambda_s_tilde == 0.0;
}

Sample sample_at(const TrackingScenario& sc, double s, std::optional<double> hint) {
  Sample out;
  out.s = s;
  const PortraitParams p = scenario_params_at(sc, s);
  out.pole_margin = pole_stability_margin(p);
  const bool exact = target_is_root(sc);
  for (int i = 0; i < 2; ++i) {
    const Sector sector = sector_at(i);
    const Cubic c = fixed_point_cubic(sector, p);
    if (sector == sc.branch && exact) {
      // Deflate the known tracked root: p(x) = (x - x_t) q(x).
      const double xt = std::sqrt(sc.target(s));
      const double q2 = c[3];
      const double q1 = c[2] + xt * q2;
      const double q0 = c[1] + xt * q1;
      out.untracked[i] = interior_roots({q0, q1, q2, 0.0});
      out.all_count[i] = out.untracked[i].size() + 1;
      out.has_tracked = true;
      out.x_tracked = xt;
      continue;
    }
    std::vector<double> roots = interior_roots(c);
    out.all_count[i] = roots.size();
    if (sector == sc.branch && hint && !roots.empty()) {
      std::size_t best = 0;
      for (std::size_t j = 1; j < roots.size(); ++j) {
        if (std::abs(roots[j] - *hint) < std::abs(roots[best] - *hint)) best = j;
      }
      if (std::abs(roots[best] - *hint) <= kMaxJump) {
        out.has_tracked = true;
        out.x_tracked = roots[best];
        roots.erase(roots.begin() + static_cast<std::ptrdiff_t>(best));
      }
    }
    out.untracked[i] = std::move(roots);
  }
  if (out.has_tracked) {
    out.det_tracked = linearization_determinant(out.x_tracked * out.x_tracked, sc.branch, p);
  }
  return out;
}

// Shrinks [lo, hi] until it is shorter than `tol`, keeping pred(lo) != pred(hi).
double bisect(double lo, double hi, double tol, const std::function<bool(double)>& pred) {
  const bool at_lo = pred(lo);
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (pred(mid) == at_lo) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

Stability stability_from(double det) {
  if (std::abs(det) <= kDegenerateDeterminant) return Stability::degenerate;
  return det > 0.0 ? Stability::elliptic : Stability::hyperbolic;
}

[[noreturn]] void too_coarse(double s0, double s1, const char* what) {
  std::ostringstream msg;
  msg << "crossing scan grid too coarse between s = " << s0 << " and s = " << s1
      << " (" << what << "); increase the number of time samples";
  throw ResolutionError(msg.str());
}

void check_matching(const std::vector<double>& prev, const std::vector<double>& cur,
                    double s0, double s1) {
  for (double x : cur) {
    double best = 2.0;
    for (double y : prev) best = std::min(best, std::abs(x - y));
    if (best > kMaxJump) too_coarse(s0, s1, "untracked root moved too far");
  }
}

}  // namespace

std::string_view to_string(CrossingKind kind) {
  switch (kind) {
    case CrossingKind::tracked_crossing: return "tracked_crossing";
    case CrossingKind::root_collision: return "root_collision";
    case CrossingKind::pole_flip: return "pole_flip";
  }
  return "?";
}

std::string_view to_string(CrossingTag tag) {
  switch (tag) {
    case CrossingTag::saddle_center: return "saddle-center";
    case CrossingTag::root_collision: return "root-collision";
    case CrossingTag::none: return "none";
  }
  return "?";
}

std::size_t count_tracked_crossings(const std::vector<CrossingReport>& reports) {
  return static_cast<std::size_t>(
      std::count_if(reports.begin(), reports.end(), [](const CrossingReport& r) {
        return r.kind == CrossingKind::tracked_crossing;
      }));
}

std::vector<CrossingReport> scan_crossings(const TrackingScenario& sc,
                                           std::size_t n_time_samples) {
  sc.params.validate();
  if (n_time_samples < 3) {
    throw ResolutionError("crossing scan needs at least three time samples");
  }
  const double begin = sc.window_begin();
  const double end = sc.window_end();
  const double h = (end - begin) / static_cast<double>(n_time_samples + 1);
  const double tol = 1e-8 * sc.params.tau;
  const FixedPointKind tracked_kind = kind_of(sc.branch);

  const bool exact = target_is_root(sc);
  auto hint_from = [&](const Sample& a) -> std::optional<double> {
    if (exact || !a.has_tracked) return std::nullopt;
    return a.x_tracked;
  };

  std::vector<Sample> samples;
  samples.reserve(n_time_samples);
  {
    const double s1 = begin + h;
    samples.push_back(sample_at(sc, s1, exact ? std::nullopt
                                              : std::optional<double>(std::sqrt(sc.target(s1)))));
  }

  auto margin_at = [&](double s) { return pole_stability_margin(scenario_params_at(sc, s)); };

  std::vector<CrossingReport> reports;
  std::size_t last_nonzero = 0;
  int last_sign = samples[0].has_tracked ? sign_of(samples[0].det_tracked, kDegenerateDeterminant)
                                         : 0;
  bool in_degenerate_run = last_sign == 0;

  for (std::size_t i = 1; i < n_time_samples; ++i) {
    samples.push_back(
        sample_at(sc, begin + h * static_cast<double>(i + 1), hint_from(samples[i - 1])));
    const Sample& prev = samples[i - 1];
    Sample& b = samples[i];

    // P = 1 pole; a root of one sector passes through x = 1 at the flip.
    int expected_change[2] = {0, 0};
    bool tracked_exit = false;
    if ((prev.pole_margin > 0.0) != (b.pole_margin > 0.0)) {
      const double s_flip =
          bisect(prev.s, b.s, tol, [&](double s) { return margin_at(s) > 0.0; });
      const PortraitParams p = scenario_params_at(sc, s_flip);
      const int which = (p.delta_tilde + p.lambda_s_tilde) > 0.0 ? 0 : 1;
      const auto count_a = prev.all_count[which];
      const auto count_b = b.all_count[which];
      expected_change[which] = count_b > count_a ? 1 : (count_b < count_a ? -1 : 0);
      CrossingReport r;
      r.s = s_flip;
      r.branch = FixedPointKind::pole_p1;
      r.kind = CrossingKind::pole_flip;
      r.tag = CrossingTag::none;
      r.before = prev.pole_margin > 0.0 ? Stability::elliptic : Stability::hyperbolic;
      r.after = b.pole_margin > 0.0 ? Stability::elliptic : Stability::hyperbolic;
      r.P = 1.0;
      reports.push_back(r);
      // Without compensation the followed root can be the one leaving at x = 1.
      if (!exact && prev.has_tracked && sector_at(which) == sc.branch &&
          expected_change[which] < 0) {
        const auto& rest = prev.untracked[which];
        if (rest.empty() || prev.x_tracked > *std::max_element(rest.begin(), rest.end())) {
          CrossingReport t = r;
          t.branch = tracked_kind;
          t.kind = CrossingKind::tracked_crossing;
          t.before = stability_from(prev.det_tracked);
          tracked_exit = true;
          reports.push_back(t);
        }
      }
    }

    // Births and merges of root pairs; without compensation the tracked
    // root itself can be one of a merging pair.
    bool tracked_lost = tracked_exit;
    for (int k = 0; k < 2; ++k) {
      const int change = static_cast<int>(b.all_count[k]) - static_cast<int>(prev.all_count[k]) -
                         expected_change[k];
      if (change == 0) {
        if (expected_change[k] == 0 && prev.untracked[k].size() == b.untracked[k].size()) {
          check_matching(prev.untracked[k], b.untracked[k], prev.s, b.s);
        }
        continue;
      }
      if (std::abs(change) != 2) too_coarse(prev.s, b.s, "unmatched change in root count");
      const std::size_t n0 = prev.all_count[k];
      const Sector sector = sector_at(k);
      const bool follow = !exact && sector == sc.branch && prev.has_tracked;
      auto count_at = [&](double s) {
        return sample_at(sc, s, std::nullopt).all_count[k] == n0;
      };
      const double s_c = bisect(prev.s, b.s, tol, count_at);
      // Position of the merging pair: closest pair on the side where it exists.
      const Sample near = sample_at(sc, change > 0 ? s_c + tol : s_c - tol,
                                    follow ? std::optional<double>(prev.x_tracked) : std::nullopt);
      std::vector<double> roots = near.untracked[k];
      if (follow && near.has_tracked) roots.push_back(near.x_tracked);
      std::sort(roots.begin(), roots.end());
      double x_c = roots.empty() ? 0.0 : roots.front();
      double gap = 2.0;
      bool with_tracked = false;
      for (std::size_t j = 1; j < roots.size(); ++j) {
        if (roots[j] - roots[j - 1] < gap) {
          gap = roots[j] - roots[j - 1];
          x_c = 0.5 * (roots[j] + roots[j - 1]);
          with_tracked = follow && near.has_tracked &&
                         (roots[j] == near.x_tracked || roots[j - 1] == near.x_tracked);
        }
      }
      CrossingReport r;
      r.s = s_c;
      r.branch = kind_of(sector);
      r.P = x_c * x_c;
      if (with_tracked && change < 0) {
        // The followed fixed point annihilates with its partner.
        r.kind = CrossingKind::tracked_crossing;
        r.tag = CrossingTag::saddle_center;
        r.before = stability_from(prev.det_tracked);
        r.after = Stability::degenerate;
        tracked_lost = true;
      } else {
        r.kind = CrossingKind::root_collision;
        r.tag = CrossingTag::root_collision;
        r.before = stability_from(prev.det_tracked);
        r.after = stability_from(b.det_tracked);
      }
      reports.push_back(r);
    }
    if (tracked_lost && b.has_tracked) {
      auto& rest = b.untracked[sc.branch == Sector::alpha0 ? 0 : 1];
      rest.push_back(b.x_tracked);
      std::sort(rest.begin(), rest.end());
      b.has_tracked = false;
    }
    if (prev.has_tracked && !b.has_tracked && !tracked_lost) {
      too_coarse(prev.s, b.s, "tracked root lost");
    }
    if (!b.has_tracked) continue;
    if (std::abs(b.x_tracked - prev.x_tracked) > kMaxJump) {
      too_coarse(prev.s, b.s, "tracked root moved too far");
    }

    // Tracked root: sign of the linearization determinant.
    const int sgn = sign_of(b.det_tracked, kDegenerateDeterminant);
    if (sgn == 0) {
      in_degenerate_run = true;
    } else {
      if (last_sign != 0 && sgn != last_sign) {
        const double s0 = samples[last_nonzero].s;
        const std::optional<double> hint = hint_from(samples[last_nonzero]);
        auto det_positive = [&](double s) {
          const Sample q = sample_at(sc, s, hint);
          return q.has_tracked && q.det_tracked > 0.0;
        };
        const double sc_time = bisect(s0, b.s, tol, det_positive);
        CrossingReport r;
        r.s = sc_time;
        r.branch = tracked_kind;
        r.kind = CrossingKind::tracked_crossing;
        r.tag = CrossingTag::saddle_center;
        r.before = stability_from(samples[last_nonzero].det_tracked);
        r.after = stability_from(b.det_tracked);
        const Sample at = sample_at(sc, sc_time, hint);
        r.P = at.x_tracked * at.x_tracked;
        reports.push_back(r);
      } else if (in_degenerate_run && last_sign != 0 && sgn == last_sign) {
        // Touched zero without changing sign: tangential collision.
        CrossingReport r;
        r.s = prev.s;
        r.branch = tracked_kind;
        r.kind = CrossingKind::tracked_crossing;
        r.tag = CrossingTag::root_collision;
        r.before = Stability::degenerate;
        r.after = Stability::degenerate;
        r.P = prev.x_tracked * prev.x_tracked;
        reports.push_back(r);
      }
      last_sign = sgn;
      last_nonzero = i;
      in_degenerate_run = false;
    }
  }
  std::sort(reports.begin(), reports.end(),
            [](const CrossingReport& x, const CrossingReport& y) { return x.s < y.s; });
  return reports;
}

}  // namespace kerrtrack
