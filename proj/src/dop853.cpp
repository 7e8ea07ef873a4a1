#include "fpt/dop853.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <fmt/format.h>

#include "fpt/error.hpp"

namespace fpt {
namespace {

// Dormand-Prince 8(5,3) tableau as published by Hairer & Wanner (DOP853).
constexpr double c2 = 0.526001519587677318785587544488e-01;
constexpr double c3 = 0.789002279381515978178381316732e-01;
constexpr double c4 = 0.118350341907227396726757197510e+00;
constexpr double c5 = 0.281649658092772603273242802490e+00;
constexpr double c6 = 0.333333333333333333333333333333e+00;
constexpr double c7 = 0.25e+00;
constexpr double c8 = 0.307692307692307692307692307692e+00;
constexpr double c9 = 0.651282051282051282051282051282e+00;
constexpr double c10 = 0.6e+00;
constexpr double c11 = 0.857142857142857142857142857142e+00;

constexpr double a21 = 5.26001519587677318785587544488e-2;
constexpr double a31 = 1.97250569845378994544595329183e-2;
constexpr double a32 = 5.91751709536136983633785987549e-2;
constexpr double a41 = 2.95875854768068491816892993775e-2;
constexpr double a43 = 8.87627564304205475450678981324e-2;
constexpr double a51 = 2.41365134159266685502369798665e-1;
constexpr double a53 = -8.84549479328286085344864962717e-1;
constexpr double a54 = 9.24834003261792003115737966543e-1;
constexpr double a61 = 3.7037037037037037037037037037e-2;
constexpr double a64 = 1.70828608729473871279604482173e-1;
constexpr double a65 = 1.25467687566822425016691814123e-1;
constexpr double a71 = 3.7109375e-2;
constexpr double a74 = 1.70252211019544039314978060272e-1;
constexpr double a75 = 6.02165389804559606850219397283e-2;
constexpr double a76 = -1.7578125e-2;
constexpr double a81 = 3.70920001185047927108779319836e-2;
constexpr double a84 = 1.70383925712239993810214054705e-1;
constexpr double a85 = 1.07262030446373284651809199168e-1;
constexpr double a86 = -1.53194377486244017527936158236e-2;
constexpr double a87 = 8.27378916381402288758473766002e-3;
constexpr double a91 = 6.24110958716075717114429577812e-1;
constexpr double a94 = -3.36089262944694129406857109825e0;
constexpr double a95 = -8.68219346841726006818189891453e-1;
constexpr double a96 = 2.75920996994467083049415600797e1;
constexpr double a97 = 2.01540675504778934086186788979e1;
constexpr double a98 = -4.34898841810699588477366255144e1;
constexpr double a101 = 4.77662536438264365890433908527e-1;
constexpr double a104 = -2.48811461997166764192642586468e0;
constexpr double a105 = -5.90290826836842996371446475743e-1;
constexpr double a106 = 2.12300514481811942347288949897e1;
constexpr double a107 = 1.52792336328824235832596922938e1;
constexpr double a108 = -3.32882109689848629194453265587e1;
constexpr double a109 = -2.03312017085086261358222928593e-2;
constexpr double a111 = -9.3714243008598732571704021658e-1;
constexpr double a114 = 5.18637242884406370830023853209e0;
constexpr double a115 = 1.09143734899672957818500254654e0;
constexpr double a116 = -8.14978701074692612513997267357e0;
constexpr double a117 = -1.85200656599969598641566180701e1;
constexpr double a118 = 2.27394870993505042818970056734e1;
constexpr double a119 = 2.49360555267965238987089396762e0;
constexpr double a1110 = -3.0467644718982195003823669022e0;
constexpr double a121 = 2.27331014751653820792359768449e0;
constexpr double a124 = -1.05344954667372501984066689879e1;
constexpr double a125 = -2.00087205822486249909675718444e0;
constexpr double a126 = -1.79589318631187989172765950534e1;
constexpr double a127 = 2.79488845294199600508499808837e1;
constexpr double a128 = -2.85899827713502369474065508674e0;
constexpr double a129 = -8.87285693353062954433549289258e0;
constexpr double a1210 = 1.23605671757943030647266201528e1;
constexpr double a1211 = 6.43392746015763530355970484046e-1;

constexpr double b1 = 5.42937341165687622380535766363e-2;
constexpr double b6 = 4.45031289275240888144113950566e0;
constexpr double b7 = 1.89151789931450038304281599044e0;
constexpr double b8 = -5.8012039600105847814672114227e0;
constexpr double b9 = 3.1116436695781989440891606237e-1;
constexpr double b10 = -1.52160949662516078556178806805e-1;
constexpr double b11 = 2.01365400804030348374776537501e-1;
constexpr double b12 = 4.47106157277725905176885569043e-2;

// 3rd-order embedded weights on k1, k9, k12.
constexpr double bhh1 = 0.244094488188976377952755905512e+00;
constexpr double bhh2 = 0.733846688281611857341361741547e+00;
constexpr double bhh3 = 0.220588235294117647058823529412e-01;

// 5th-order error weights.
constexpr double er1 = 0.1312004499419488073250102996e-01;
constexpr double er6 = -0.1225156446376204440720569753e+01;
constexpr double er7 = -0.4957589496572501915214079952e+00;
constexpr double er8 = 0.1664377182454986536961530415e+01;
constexpr double er9 = -0.3503288487499736816886487290e+00;
constexpr double er10 = 0.3341791187130174790297318841e+00;
constexpr double er11 = 0.8192320648511571246570742613e-01;
constexpr double er12 = -0.2235530786388629525884427845e-01;

constexpr double kSafety = 0.9;
constexpr double kFacMin = 0.333;
constexpr double kFacMax = 6.0;

class Stepper {
 public:
  Stepper(const OdeRhs& rhs, std::size_t n, const IntegratorConfig& cfg, IntegrationStats& stats)
      : rhs_(rhs), n_(n), cfg_(cfg), stats_(stats), k_(12, std::vector<double>(n)), tmp_(n),
        ynew_(n) {}

  void eval(double t, std::span<const double> y, std::vector<double>& out) {
    rhs_(t, y, out);
    ++stats_.evaluations;
  }

  double error_scale(double y0, double y1) const {
    return cfg_.abs_tol + cfg_.rel_tol * std::max(std::abs(y0), std::abs(y1));
  }

  double rms(const std::vector<double>& v, std::span<const double> y) const {
    double s = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      const double q = v[i] / error_scale(y[i], y[i]);
      s += q * q;
    }
    return std::sqrt(s / static_cast<double>(n_));
  }

  // Hairer's starting step heuristic; k_[0] holds f(t, y).
  double initial_step(double t, std::span<const double> y, double direction) {
    std::vector<double>& f0 = k_[0];
    const double d0 = rms(std::vector<double>(y.begin(), y.end()), y);
    const double d1 = rms(f0, y);
    double h0 = (d0 < 1e-10 || d1 < 1e-10) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, cfg_.max_step);
    for (std::size_t i = 0; i < n_; ++i) tmp_[i] = y[i] + direction * h0 * f0[i];
    std::vector<double>& f1 = k_[1];
    eval(t + direction * h0, tmp_, f1);
    for (std::size_t i = 0; i < n_; ++i) ynew_[i] = f1[i] - f0[i];
    const double d2 = rms(ynew_, y) / h0;
    const double dmax = std::max(d1, d2);
    const double h1 = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dmax, 1.0 / 8.0);
    return std::min({100.0 * h0, h1, cfg_.max_step});
  }

  // One trial step of signed size h from (t, y); k_[0] must hold f(t, y).
  // Fills ynew_ and returns the scaled error norm.
  double trial(double t, std::span<const double> y, double h) {
    auto& k1 = k_[0];
    auto& k2 = k_[1];
    auto& k3 = k_[2];
    auto& k4 = k_[3];
    auto& k5 = k_[4];
    auto& k6 = k_[5];
    auto& k7 = k_[6];
    auto& k8 = k_[7];
    auto& k9 = k_[8];
    auto& k10 = k_[9];
    auto& k11 = k_[10];
    auto& k12 = k_[11];
    const std::size_t n = n_;

    for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + h * a21 * k1[i];
    eval(t + c2 * h, tmp_, k2);
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    eval(t + c3 * h, tmp_, k3);
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + h * (a41 * k1[i] + a43 * k3[i]);
    eval(t + c4 * h, tmp_, k4);
    for (std::size_t i = 0; i < n; ++i)
      tmp_[i] = y[i] + h * (a51 * k1[i] + a53 * k3[i] + a54 * k4[i]);
    eval(t + c5 * h, tmp_, k5);
    for (std::size_t i = 0; i < n; ++i)
      tmp_[i] = y[i] + h * (a61 * k1[i] + a64 * k4[i] + a65 * k5[i]);
    eval(t + c6 * h, tmp_, k6);
    for (std::size_t i = 0; i < n; ++i)
      tmp_[i] = y[i] + h * (a71 * k1[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
    eval(t + c7 * h, tmp_, k7);
    for (std::size_t i = 0; i < n; ++i)
      tmp_[i] = y[i] + h * (a81 * k1[i] + a84 * k4[i] + a85 * k5[i] + a86 * k6[i] + a87 * k7[i]);
    eval(t + c8 * h, tmp_, k8);
    for (std::size_t i = 0; i < n; ++i)
      tmp_[i] = y[i] + h * (a91 * k1[i] + a94 * k4[i] + a95 * k5[i] + a96 * k6[i] + a97 * k7[i] +
                            a98 * k8[i]);
    eval(t + c9 * h, tmp_, k9);
    for (std::size_t i = 0; i < n; ++i)
      tmp_[i] = y[i] + h * (a101 * k1[i] + a104 * k4[i] + a105 * k5[i] + a106 * k6[i] +
                            a107 * k7[i] + a108 * k8[i] + a109 * k9[i]);
    eval(t + c10 * h, tmp_, k10);
    for (std::size_t i = 0; i < n; ++i)
      tmp_[i] = y[i] + h * (a111 * k1[i] + a114 * k4[i] + a115 * k5[i] + a116 * k6[i] +
                            a117 * k7[i] + a118 * k8[i] + a119 * k9[i] + a1110 * k10[i]);
    eval(t + c11 * h, tmp_, k11);
    for (std::size_t i = 0; i < n; ++i)
      tmp_[i] = y[i] + h * (a121 * k1[i] + a124 * k4[i] + a125 * k5[i] + a126 * k6[i] +
                            a127 * k7[i] + a128 * k8[i] + a129 * k9[i] + a1210 * k10[i] +
                            a1211 * k11[i]);
    eval(t + h, tmp_, k12);

    double err3 = 0.0;
    double err5 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double incr = b1 * k1[i] + b6 * k6[i] + b7 * k7[i] + b8 * k8[i] + b9 * k9[i] +
                          b10 * k10[i] + b11 * k11[i] + b12 * k12[i];
      ynew_[i] = y[i] + h * incr;
      const double sk = error_scale(y[i], ynew_[i]);
      const double e3 = incr - bhh1 * k1[i] - bhh2 * k9[i] - bhh3 * k12[i];
      const double e5 = er1 * k1[i] + er6 * k6[i] + er7 * k7[i] + er8 * k8[i] + er9 * k9[i] +
                        er10 * k10[i] + er11 * k11[i] + er12 * k12[i];
      err3 += (e3 / sk) * (e3 / sk);
      err5 += (e5 / sk) * (e5 / sk);
    }
    double deno = err5 + 0.01 * err3;
    if (deno <= 0.0) deno = 1.0;
    return std::abs(h) * err5 * std::sqrt(1.0 / (deno * static_cast<double>(n)));
  }

  std::vector<double>& k1() { return k_[0]; }
  std::vector<double>& ynew() { return ynew_; }

 private:
  const OdeRhs& rhs_;
  std::size_t n_;
  const IntegratorConfig& cfg_;
  IntegrationStats& stats_;
  std::vector<std::vector<double>> k_;
  std::vector<double> tmp_;
  std::vector<double> ynew_;
};

}  // namespace

void IntegratorConfig::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) {
    throw ConfigError("integrator tolerances must be positive");
  }
  if (!(min_step > 0.0) || !(min_step < max_step)) {
    throw ConfigError(fmt::format("integrator requires 0 < min_step < max_step (got {}, {})",
                                  min_step, max_step));
  }
  if (max_steps == 0) throw ConfigError("integrator max_steps must be positive");
}

IntegrationStats integrate_dop853(const OdeRhs& rhs, std::span<double> y, double t0,
                                  std::span<const double> output_times,
                                  const IntegratorConfig& cfg, const OdeObserver& observer) {
  cfg.validate();
  IntegrationStats stats;
  if (output_times.empty()) return stats;

  const double t_end = output_times.back();
  const double direction = t_end >= t0 ? 1.0 : -1.0;
  Stepper stepper(rhs, y.size(), cfg, stats);

  double t = t0;
  std::size_t next = 0;
  auto report = [&] {
    while (next < output_times.size() && output_times[next] == t) {
      if (observer) observer(next, t, y);
      ++next;
    }
  };
  report();
  if (next == output_times.size()) return stats;

  stepper.eval(t, y, stepper.k1());
  double h = stepper.initial_step(t, y, direction);
  bool last_rejected = false;

  while (next < output_times.size()) {
    const double target = output_times[next];
    if ((target - t) * direction < 0.0) {
      throw ConfigError("output times must be monotone in the direction of integration");
    }
    if (stats.accepted + stats.rejected >= cfg.max_steps) {
      throw IntegrationError(fmt::format("step budget of {} exhausted at t = {}", cfg.max_steps, t));
    }

    const double remaining = std::abs(target - t);
    const bool truncated = h >= remaining;
    const double h_try = truncated ? remaining : h;
    const double err = stepper.trial(t, y, direction * h_try);
    const double fac11 = std::pow(err, 1.0 / 8.0);
    double fac = fac11 / kSafety;

    if (err <= 1.0) {
      ++stats.accepted;
      fac = std::clamp(fac, 1.0 / kFacMax, 1.0 / kFacMin);
      double h_new = std::min(h_try / fac, cfg.max_step);
      if (last_rejected) h_new = std::min(h_new, h_try);
      last_rejected = false;

      t = truncated ? target : t + direction * h_try;
      std::copy(stepper.ynew().begin(), stepper.ynew().end(), y.begin());
      for (double v : y) {
        if (!std::isfinite(v)) {
          throw IntegrationError(fmt::format("non-finite solution at t = {}", t));
        }
      }
      report();
      if (next < output_times.size()) stepper.eval(t, y, stepper.k1());
      // A truncated step says nothing about the natural scale; keep h.
      h = truncated ? std::max(h, h_new) : h_new;
    } else {
      ++stats.rejected;
      last_rejected = true;
      h = h_try / std::min(1.0 / kFacMin, fac);
      if (h < cfg.min_step) {
        throw IntegrationError(
            fmt::format("step size underflow ({} < {}) at t = {}", h, cfg.min_step, t));
      }
    }
  }
  return stats;
}

IntegrationStats integrate_dop853(const OdeRhs& rhs, std::span<double> y, double t0, double t1,
                                  const IntegratorConfig& cfg) {
  const double times[] = {t1};
  return integrate_dop853(rhs, y, t0, times, cfg);
}

}  // namespace fpt
