#include "lep/sweep.hpp"

#include <atomic>
#include <bit>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <sstream>
#include <thread>

#include "lep/channels.hpp"
#include "lep/rng.hpp"
#include "lep/uncertainty.hpp"

namespace lep {

void SweepConfig::validate() const {
  if (points < 2) throw DimensionError("sweep: need at least 2 grid points");
  if (!(gamma_x_max > gamma_x_min)) throw DimensionError("sweep: empty gamma_x range");
  if (gamma_x_min < 0) throw DimensionError("sweep: gamma_x must be non-negative");
  if (gamma_y < 0 || gamma_minus < 0) throw DimensionError("sweep: rates must be non-negative");
  if (omega <= 0) throw DimensionError("sweep: omega must be positive");
  if (dt <= 0) throw DimensionError("sweep: dt must be positive");
  if (shots < 0) throw DimensionError("sweep: negative shot count");
  if (white_noise < 0 || white_noise > 1) throw DimensionError("sweep: white noise outside [0,1]");
  if (workers < 1) throw DimensionError("sweep: need at least one worker");
}

double SweepConfig::gamma_x_at(int index) const {
  return gamma_x_min + (gamma_x_max - gamma_x_min) * index / (points - 1);
}

std::string regime_label(const RegimeReport& report) {
  bool oscillatory = false, overdamped = false;
  for (ModeType t : report.types) {
    if (t == ModeType::oscillatory) oscillatory = true;
    if (t == ModeType::overdamped) overdamped = true;
  }
  if (report.spiraling) return "spiraling";
  if (oscillatory) return "oscillatory";
  if (overdamped) return "overdamped";
  return "stationary";
}

namespace {

DrivenQubitParams point_params(const SweepConfig& cfg, double gamma_x) {
  DrivenQubitParams prm;
  prm.omega = cfg.omega;
  prm.gamma_minus = cfg.gamma_minus;
  prm.gamma_x = gamma_x;
  prm.gamma_y = cfg.gamma_y;
  return prm;
}

int profile_blocks(const SweepConfig& cfg) {
  const double inv = 1.0 / (cfg.omega * cfg.dt);
  return std::clamp(static_cast<int>(std::lround(inv)), 1, 100);
}

SweepRow compute_row(const SweepConfig& cfg, int index) {
  const DrivenQubitParams prm = point_params(cfg, cfg.gamma_x_at(index));
  const Mat ideal = driven_qubit_liouvillian(prm);

  NoiseModel noise;
  noise.white_noise = cfg.white_noise;
  noise.shots = cfg.shots;
  noise.seed = mix_seed(cfg.seed, static_cast<std::uint64_t>(index));

  QptResult q = run_qpt(ideal, cfg.method, noise, cfg.dt);

  SweepRow row;
  row.gamma_x = prm.gamma_x;
  for (int k = 0; k < 4; ++k) row.eigenvalues[k] = q.eigensystem.values(k);
  row.overlap_12 = eigen_overlap(q.eigensystem, 1, 2, OverlapKind::right_right);
  row.regime = regime_label(q.regime);
  row.gap = q.regime.gap;

  Eigensystem ideal_es = eig_general(ideal);
  const Mat dl = q.liouvillian - ideal;
  const cd d1 = perturb_eigenvalue_raw(ideal_es, 1, dl);
  const cd d2 = perturb_eigenvalue_raw(ideal_es, 2, dl);
  row.err_re_l1 = std::abs(d1.real());
  row.err_im_l1 = std::abs(d1.imag());
  row.err_re_l2 = std::abs(d2.real());
  row.err_im_l2 = std::abs(d2.imag());

  if (cfg.white_noise > 0) {
    try {
      ProfileOptions popts;
      popts.blocks = profile_blocks(cfg);
      const TriangularNoiseFit fit = gamma_error_bars(model_fidelity_profile(prm, popts),
                                                      cfg.white_noise, 2, BarMode::symmetric);
      row.gamma_err_left = fit.bar_left;
      row.gamma_err_right = fit.bar_right;
    } catch (const NumericalError&) {
      row.gamma_err_left = row.gamma_err_right = std::numeric_limits<double>::quiet_NaN();
    }
  }

  if (cfg.emit_s_matrix) row.s_matrix = tomogram_s_form(q.tomogram);
  return row;
}

}  // namespace

SweepResult run_sweep(const SweepConfig& cfg) {
  cfg.validate();

  SweepResult result;
  result.config = cfg;
  result.rows.resize(cfg.points);

  std::atomic<int> next{0};
  std::mutex failure_mutex;
  std::exception_ptr failure;

  auto work = [&]() {
    for (;;) {
      const int index = next.fetch_add(1);
      if (index >= cfg.points) return;
      try {
        result.rows[index] = compute_row(cfg, index);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };

  const int nthreads = std::min(cfg.workers, cfg.points);
  if (nthreads <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  if (cfg.points >= 3) {
    auto family = [&cfg](double gamma_x) {
      const DrivenQubitParams prm = point_params(cfg, gamma_x);
      NoiseModel noise;
      noise.white_noise = cfg.white_noise;
      noise.shots = cfg.shots;
      noise.seed = mix_seed(cfg.seed, std::bit_cast<std::uint64_t>(gamma_x));
      const Mat s = first_order_propagator(driven_qubit_liouvillian(prm), cfg.dt);
      const Tomogram t = tomogram_from_records(simulate_records(s, noise), cfg.method, cfg.dt);
      return reconstruct_liouvillian(t).liouvillian;
    };
    std::vector<double> grid(cfg.points);
    for (int i = 0; i < cfg.points; ++i) grid[i] = cfg.gamma_x_at(i);
    result.leps = detect_leps(family, grid);
  }
  return result;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (v == 0.0) return "0";  // normalizes negative zero
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string sweep_csv(const SweepResult& result) {
  std::ostringstream out;
  out << "gamma_x,re_l0,im_l0,re_l1,im_l1,re_l2,im_l2,re_l3,im_l3,overlap_12,regime,gap,"
         "err_re_l1,err_im_l1,err_re_l2,err_im_l2,gamma_err_left,gamma_err_right\n";
  for (const SweepRow& row : result.rows) {
    out << format_double(row.gamma_x);
    for (const cd& l : row.eigenvalues)
      out << ',' << format_double(l.real()) << ',' << format_double(l.imag());
    out << ',' << format_double(row.overlap_12) << ',' << row.regime << ','
        << format_double(row.gap) << ',' << format_double(row.err_re_l1) << ','
        << format_double(row.err_im_l1) << ',' << format_double(row.err_re_l2) << ','
        << format_double(row.err_im_l2) << ',' << format_double(row.gamma_err_left) << ','
        << format_double(row.gamma_err_right) << '\n';
  }
  for (const LEPReport& lep : result.leps) {
    out << "# lep gamma_x=" << format_double(lep.param) << " modes=" << lep.mode_a << ','
        << lep.mode_b << " separation=" << format_double(lep.separation)
        << " overlap=" << format_double(lep.overlap)
        << " bracket=" << format_double(lep.bracket_lo) << ',' << format_double(lep.bracket_hi)
        << '\n';
  }
  return out.str();
}

double time_estimate(long experiments, long shots, double shot_time) {
  if (experiments <= 0 || shots <= 0 || shot_time <= 0)
    throw DimensionError("time_estimate: experiments, shots and shot_time must be positive");
  return static_cast<double>(experiments) * static_cast<double>(shots) * shot_time;
}

}  // namespace lep
