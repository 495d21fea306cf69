// hyperdisk <area> <subcommand> [flags]
//
// Areas: fourier, radon euclid, radon hyp, eigen. Each run writes its CSV
// artifacts into --out-dir and a report-v1 JSON document to stdout (and to
// --report when given). Exit status: 0 when every check passes, 1 when a
// check fails, 2 for invalid configuration.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <hyperdisk/hyperdisk.hpp>

using namespace hyperdisk;
using json = nlohmann::json;

namespace {

struct Global {
  unsigned threads = 1;
  std::string out_dir = ".";
  std::string report;
  std::string config;
};

json typed(const std::string& v) {
  if (v == "true" || v == "false") return v == "true";
  std::size_t used = 0;
  try {
    double d = std::stod(v, &used);
    if (used == v.size())
      return v.find_first_of(".eEn") == std::string::npos ? json(static_cast<long long>(d)) : json(d);
  } catch (const std::exception&) {
  }
  return v;
}

class Report {
 public:
  Report(std::string command, const Global& g) : command_(std::move(command)), global_(g) {
    doc_["schema"] = "report-v1";
    doc_["command"] = command_;
    doc_["checks"] = json::array();
    doc_["metrics"] = json::object();
    doc_["outputs"] = json::array();
    start_ = std::chrono::steady_clock::now();
  }

  json& metrics() { return doc_["metrics"]; }

  /// Records value < tolerance (or > tolerance when `above`).
  void check(const std::string& name, double value, double tolerance, bool above = false) {
    bool ok = std::isfinite(value) && (above ? value > tolerance : value < tolerance);
    doc_["checks"].push_back({{"name", name}, {"value", value}, {"tolerance", tolerance},
                              {"relation", above ? ">" : "<"}, {"pass", ok}});
    pass_ = pass_ && ok;
  }
  void check_flag(const std::string& name, bool ok) {
    doc_["checks"].push_back({{"name", name}, {"pass", ok}});
    pass_ = pass_ && ok;
  }

  std::string output(const std::string& name) {
    std::filesystem::create_directories(global_.out_dir);
    std::string path = (std::filesystem::path(global_.out_dir) / name).string();
    doc_["outputs"].push_back(path);
    return path;
  }

  void config(const CLI::App& app) {
    json cfg = json::object();
    for (const CLI::App* a = &app; a != nullptr; a = a->get_parent())
      for (const CLI::Option* o : a->get_options()) {
        if (o->get_lnames().empty() || o->get_lnames().front() == "help" || o->get_lnames().front() == "config")
          continue;
        const std::string& key = o->get_lnames().front();
        if (cfg.contains(key)) continue;
        if (o->count() > 0) {
          cfg[key] = typed(o->as<std::string>());
        } else {
          std::string v = o->get_default_str();
          cfg[key] = (v == "nan" || v == "-1" || v == "-1.0") ? json("auto") : typed(v);
        }
      }
    doc_["config"] = cfg;
  }

  int finish() {
    doc_["runtime_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    doc_["pass"] = pass_;
    std::string text = doc_.dump(2);
    std::cout << text << '\n';
    if (!global_.report.empty()) {
      std::ofstream out(global_.report);
      if (!out) throw std::runtime_error("cannot open report file " + global_.report);
      out << text << '\n';
    }
    return pass_ ? 0 : 1;
  }

 private:
  std::string command_;
  const Global& global_;
  json doc_;
  bool pass_ = true;
  std::chrono::steady_clock::time_point start_;
};

// ---------------------------------------------------------------- fourier

struct FourierOptions {
  std::string test_fn = "radial-bump";
  double r0 = 0.5, cx = 0.0, cy = 0.0, width = 0.3, amplitude = 1.0;
  double lambda_max = 20.0, dlambda = 0.05;
  int n_boundary = 64, n_r = 48, n_theta = 96;
  double radius = 0.5;
  int levels = 3;
  double tolerance = -1.0;
  std::string spectral_in, spectral_out = "spectral.csv", values_out = "inverse.csv";
  bool compare = false;
  int k = 1;
  double lambda = 0.7, z_re = 0.3, z_im = 0.1;
};

TestFunction make_test_function(const FourierOptions& o) {
  if (o.test_fn == "radial-bump") return TestFunction::radial_bump(o.r0, o.amplitude);
  if (o.test_fn == "mobius-translated-bump") return TestFunction::mobius_translated_bump(DiskPoint(o.cx, o.cy), o.r0, o.amplitude);
  if (o.test_fn == "gaussian-in-distance") return TestFunction::gaussian_in_distance(o.width, o.amplitude);
  return TestFunction::radial_bump(o.r0, 0.0);
}

std::vector<DiskPoint> polar_sample(double radius) {
  std::vector<DiskPoint> pts;
  for (int i = 0; i <= 10; ++i)
    for (int j = 0; j < 8; ++j) pts.emplace_back(std::polar(radius * i / 10.0, 0.7 * j + 0.1));
  return pts;
}

/// Max |f^{-1}(f~) - f| over the sample, relative to max |f| (absolute for f = 0).
double roundtrip_error(const TestFunction& f, const SpectralData& sd, double radius) {
  double err = 0.0, peak = 0.0;
  for (DiskPoint z : polar_sample(radius)) {
    err = std::max(err, std::abs(fourier_inverse(sd, z) - f(z)));
    peak = std::max(peak, std::abs(f(z)));
  }
  return peak > 0.0 ? err / peak : err;
}

SpectralGrid spectral_grid(const FourierOptions& o, double lambda_max) { return {lambda_max, o.dlambda, o.n_boundary}; }

void write_spectral_file(Report& rep, const FourierOptions& o, const SpectralData& sd) {
  std::ofstream out(rep.output(o.spectral_out));
  io::write_spectral(out, sd);
}

void add_test_function_options(CLI::App* c, FourierOptions& o) {
  c->add_option("--test-fn", o.test_fn, "test function")
      ->check(CLI::IsMember({"radial-bump", "mobius-translated-bump", "gaussian-in-distance", "zero"}));
  c->add_option("--r0", o.r0, "Euclidean support radius of the bumps")->check(CLI::Range(0.0, 1.0).description("(0, 1)"));
  c->add_option("--cx", o.cx, "translated bump center, real part");
  c->add_option("--cy", o.cy, "translated bump center, imaginary part");
  c->add_option("--width", o.width, "gaussian width in distance")->check(CLI::PositiveNumber);
  c->add_option("--amplitude", o.amplitude, "amplitude");
  c->add_option("--lambda-max", o.lambda_max, "spectral cutoff")->check(CLI::PositiveNumber);
  c->add_option("--dlambda", o.dlambda, "spectral step")->check(CLI::PositiveNumber);
  c->add_option("--n-boundary", o.n_boundary, "boundary nodes")->check(CLI::PositiveNumber);
  c->add_option("--n-r", o.n_r, "radial quadrature nodes")->check(CLI::PositiveNumber);
  c->add_option("--n-theta", o.n_theta, "angular quadrature nodes")->check(CLI::PositiveNumber);
}

int fourier_forward_cmd(const FourierOptions& o, Report& rep, unsigned threads) {
  auto f = make_test_function(o);
  auto sd = fourier_forward(f, spectral_grid(o, o.lambda_max), quadrature_for(f, o.n_r, o.n_theta), threads);
  write_spectral_file(rep, o, sd);
  rep.metrics()["n_lambda"] = sd.n_lambda();
  rep.metrics()["n_boundary"] = sd.n_boundary();
  return 0;
}

int fourier_inverse_cmd(const FourierOptions& o, Report& rep) {
  std::ifstream in(o.spectral_in);
  if (!in) throw std::invalid_argument("spectral-in: cannot open '" + o.spectral_in + "'");
  auto sd = io::read_spectral(in);
  std::ofstream out(rep.output(o.values_out));
  out << std::setprecision(17) << "# helgason-inverse v1\n";
  double err = 0.0, peak = 0.0;
  auto f = make_test_function(o);
  for (DiskPoint z : polar_sample(o.radius)) {
    cplx v = fourier_inverse(sd, z);
    out << z.x() << ',' << z.y() << ',' << v.real() << ',' << v.imag() << '\n';
    err = std::max(err, std::abs(v - f(z)));
    peak = std::max(peak, std::abs(f(z)));
  }
  rep.metrics()["lambda_max"] = sd.lambda_max();
  if (o.compare) rep.check("linf_relative_error", peak > 0.0 ? err / peak : err, o.tolerance > 0 ? o.tolerance : 1e-2);
  return 0;
}

int fourier_roundtrip_cmd(const FourierOptions& o, Report& rep, unsigned threads) {
  auto f = make_test_function(o);
  auto quad = quadrature_for(f, o.n_r, o.n_theta);
  json table = json::array();
  std::vector<double> errors;
  SpectralData last;
  for (int l = o.levels - 1; l >= 0; --l) {
    const double lam = o.lambda_max / std::pow(2.0, l);
    auto sd = fourier_forward(f, spectral_grid(o, lam), quad, threads);
    errors.push_back(roundtrip_error(f, sd, o.radius));
    table.push_back({{"lambda_max", lam}, {"linf_relative_error", errors.back()}});
    last = std::move(sd);
  }
  write_spectral_file(rep, o, last);
  rep.metrics()["convergence"] = table;
  rep.check("linf_relative_error", errors.back(), o.tolerance > 0 ? o.tolerance : 1e-2);
  bool decreasing = true;
  for (std::size_t i = 1; i < errors.size(); ++i) decreasing = decreasing && errors[i] <= errors[i - 1];
  rep.check_flag("error_decreases_as_lambda_doubles", decreasing);
  return 0;
}

int fourier_plancherel_cmd(const FourierOptions& o, Report& rep, unsigned threads) {
  auto f = make_test_function(o);
  auto quad = quadrature_for(f, o.n_r, o.n_theta);
  json table = json::array();
  std::vector<double> defects;
  for (int l = o.levels - 1; l >= 0; --l) {
    const double lam = o.lambda_max / std::pow(2.0, l);
    auto sd = fourier_forward(f, spectral_grid(o, lam), quad, threads);
    defects.push_back(plancherel_defect(f, sd, quad));
    table.push_back({{"lambda_max", lam}, {"relative_defect", defects.back()}});
  }
  rep.metrics()["convergence"] = table;
  rep.check("relative_defect", defects.back(), o.tolerance > 0 ? o.tolerance : 1e-2);
  bool decreasing = true;
  for (std::size_t i = 1; i < defects.size(); ++i) decreasing = decreasing && defects[i] <= defects[i - 1];
  rep.check_flag("defect_decreases_under_refinement", decreasing);
  return 0;
}

int fourier_range_cmd(const FourierOptions& o, Report& rep, unsigned threads) {
  auto f = make_test_function(o);
  auto sd = fourier_forward(f, spectral_grid(o, o.lambda_max), quadrature_for(f, o.n_r, o.n_theta), threads);
  const std::size_t i = sd.index_of(o.lambda);
  rep.metrics()["coefficient_magnitude"] = std::abs(angular_coefficient(sd, i, o.k));
  const double tol = o.tolerance > 0 ? o.tolerance : 1e-7;
  rep.check("coefficient_condition_residual", coefficient_condition_residual(sd, o.lambda, o.k), tol);
  rep.check("functional_equation_residual", functional_equation_residual(sd, o.lambda, DiskPoint(o.z_re, o.z_im)), tol);
  return 0;
}

// ---------------------------------------------------------------- radon euclid

struct EuclidOptions {
  std::string phantom = "gaussian";
  double width = 1.0, radius = 1.0, cx = 0.0, cy = 0.0, amplitude = 1.0;
  int n_angles = 180;
  double P = 0.0, dp = 0.01;
  int grid_n = 256, padding = 2, eval_n = 9;
  double half_width = 0.0, eval_half_width = 0.0, probe_p = 0.0;
  double tolerance = -1.0;
  std::string sinogram_in, sinogram_out = "sinogram_euclid.csv", recon_out;
};

EuclidPhantom make_phantom_given(const EuclidOptions& o) {
  Point2 c{o.cx, o.cy};
  if (o.phantom == "gaussian") return EuclidPhantom::gaussian(o.width, c, o.amplitude);
  if (o.phantom == "disk") return EuclidPhantom::disk_indicator(o.radius, c, o.amplitude);
  if (o.phantom == "bump") return EuclidPhantom::bump(o.radius, c, o.amplitude);
  return EuclidPhantom::zero();
}

struct EuclidSetup {
  EuclidPhantom f = EuclidPhantom::zero();
  bool known = true;
  Sinogram sino;
};

EuclidSetup euclid_setup(const EuclidOptions& o, Report& rep, unsigned threads, bool phantom_given) {
  EuclidSetup s;
  s.f = make_phantom_given(o);
  if (!o.sinogram_in.empty()) {
    std::ifstream in(o.sinogram_in);
    if (!in) throw std::invalid_argument("sinogram-in: cannot open '" + o.sinogram_in + "'");
    s.sino = io::read_sinogram(in);
    s.known = phantom_given;
  } else {
    SinogramSpec spec{o.n_angles, o.P > 0.0 ? o.P : s.f.support_radius(), o.dp};
    s.sino = euclid_sinogram(s.f, spec, threads);
    std::ofstream out(rep.output(o.sinogram_out));
    io::write_sinogram(out, s.sino);
  }
  rep.metrics()["n_angles"] = s.sino.n_angles();
  rep.metrics()["n_offsets"] = s.sino.n_offsets();
  rep.metrics()["P"] = s.sino.P();
  return s;
}

ImageGrid euclid_eval_grid(const EuclidOptions& o, const EuclidPhantom& f) {
  double H = o.eval_half_width > 0.0 ? o.eval_half_width
                                     : (f.kind() == EuclidPhantom::Kind::gaussian ? 2.0 * f.scale() : f.scale());
  const int n = std::max(2, o.eval_n);
  const double h = 2.0 * H / (n - 1);
  return ImageGrid(n, n, f.center().x - H, f.center().y - H, h, h);
}

GridFunction euclid_d1_field(const Sinogram& s, const ImageGrid& g, double dp, unsigned threads) {
  return GridFunction::sample(g, [&](Point2 x) { return invert_d1(s, x, {dp}); }, INFINITY, threads);
}

double max_deviation(const GridFunction& a, const std::function<double(Point2)>& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.grid().size(); ++k) m = std::max(m, std::abs(a.values()[k] - b(a.grid().node(k))));
  return m;
}

double relative(double err, double peak) { return peak > 0.0 ? err / peak : err; }

void write_field(Report& rep, const std::string& name, const GridFunction& f) { io::write_grid(rep.output(name), f); }

int euclid_forward_cmd(const EuclidOptions& o, Report& rep, unsigned threads) {
  auto s = euclid_setup(o, rep, threads, true);
  const auto& f = s.f;
  double probe = xray_forward(f, Line{0.0, o.probe_p});
  rep.metrics()["probe"] = {{"theta", 0.0}, {"p", o.probe_p}, {"value", probe}};
  const bool centered = f.center().x == 0.0 && f.center().y == 0.0;
  if (centered && f.kind() == EuclidPhantom::Kind::gaussian) {
    double w = f.scale(), p = o.probe_p;
    double oracle = std::sqrt(pi) * w * f.amplitude() * std::exp(-p * p / (w * w));
    rep.check("probe_vs_gaussian_oracle", std::abs(probe - oracle), o.tolerance > 0 ? o.tolerance : 1e-8);
  } else if (centered && f.kind() == EuclidPhantom::Kind::disk_indicator && std::abs(o.probe_p) < f.scale()) {
    double oracle = 2.0 * f.amplitude() * std::sqrt(f.scale() * f.scale() - o.probe_p * o.probe_p);
    rep.check("probe_vs_chord_oracle", std::abs(probe - oracle), o.tolerance > 0 ? o.tolerance : 1e-6);
  } else if (f.kind() == EuclidPhantom::Kind::zero) {
    rep.check("zero_phantom_sinogram_max", *std::max_element(s.sino.values().begin(), s.sino.values().end(),
                                                             [](double a, double b) { return std::abs(a) < std::abs(b); }),
              1e-300);
  }
  return 0;
}

int euclid_d1_cmd(const EuclidOptions& o, Report& rep, unsigned threads, bool phantom_given) {
  auto s = euclid_setup(o, rep, threads, phantom_given);
  auto g = euclid_eval_grid(o, s.f);
  auto rec = euclid_d1_field(s.sino, g, o.dp, threads);
  write_field(rep, o.recon_out.empty() ? "recon_euclid_d1.csv" : o.recon_out, rec);
  if (s.known) rep.check("max_abs_error", max_deviation(rec, s.f), o.tolerance > 0 ? o.tolerance : 1e-3);
  return 0;
}

ImageGrid euclid_frac_grid(const EuclidOptions& o, const EuclidPhantom& f) {
  return ImageGrid::square(o.grid_n, o.half_width > 0.0 ? o.half_width : 2.0 * f.support_radius());
}

double frac_error(const GridFunction& rec, const EuclidPhantom& f) {
  double err = 0.0;
  for (std::size_t k = 0; k < rec.grid().size(); ++k) {
    Point2 x = rec.grid().node(k);
    if (norm2(x) <= f.support_radius()) err = std::max(err, std::abs(rec.values()[k] - f(x)));
  }
  return err;
}

int euclid_frac_cmd(const EuclidOptions& o, Report& rep, unsigned threads, bool phantom_given) {
  auto s = euclid_setup(o, rep, threads, phantom_given);
  auto rec = invert_fractional(s.sino, euclid_frac_grid(o, s.f), o.padding, threads);
  write_field(rep, o.recon_out.empty() ? "recon_euclid_frac.csv" : o.recon_out, rec);
  rep.metrics()["grid_half_width"] = -rec.grid().x0();
  if (s.known)
    rep.check("max_error_relative_to_peak", relative(frac_error(rec, s.f), s.f.peak()),
              o.tolerance > 0 ? o.tolerance : 1e-2);
  return 0;
}

int euclid_compare_cmd(const EuclidOptions& o, Report& rep, unsigned threads, bool phantom_given) {
  auto s = euclid_setup(o, rep, threads, phantom_given);
  auto g = euclid_eval_grid(o, s.f);
  auto d1 = euclid_d1_field(s.sino, g, o.dp, threads);
  auto frac = invert_fractional(s.sino, euclid_frac_grid(o, s.f), o.padding, threads);
  write_field(rep, "recon_euclid_d1.csv", d1);
  write_field(rep, "recon_euclid_frac.csv", frac);
  double peak = s.known ? s.f.peak() : d1.max_abs();
  double dev = max_deviation(d1, [&](Point2 x) { return frac(x, Interpolation::bicubic); });
  rep.metrics()["max_route_deviation"] = dev;
  if (s.known) {
    rep.metrics()["d1_max_abs_error"] = max_deviation(d1, s.f);
    rep.metrics()["frac_max_error_relative"] = relative(frac_error(frac, s.f), peak);
  }
  rep.check("route_deviation_relative_to_peak", relative(dev, peak), o.tolerance > 0 ? o.tolerance : 2e-2);
  return 0;
}

// ---------------------------------------------------------------- radon hyp

struct HypOptions {
  std::string phantom = "bump";
  double R = 0.0, cx = 0.0, cy = 0.0, amplitude = 1.0;
  int n_psi = 180, n_dir = 180, bp_n = 256;
  double S = 0.0, ds = 0.01, dp = 0.01, dt = 0.005;
  double eval_distance = 1.0, eval_h = 0.1, stencil_h = 0.05, probe_s = 0.5;
  double tolerance = -1.0;
  std::string sinogram_in, sinogram_out = "sinogram_hyp.csv", recon_out;
};

HypPhantom make_hyp_phantom(const HypOptions& o) {
  DiskPoint c(o.cx, o.cy);
  if (o.phantom == "bump") return HypPhantom::radial_bump(o.R > 0.0 ? o.R : 1.5, o.amplitude);
  if (o.phantom == "ball") return HypPhantom::ball_indicator(o.R > 0.0 ? o.R : 1.0, c, o.amplitude);
  if (o.phantom == "translated-bump") return HypPhantom::translated_bump(c, o.R > 0.0 ? o.R : 0.8, o.amplitude);
  return HypPhantom::zero();
}

struct HypSetup {
  HypPhantom f = HypPhantom::zero();
  bool known = true;
  HypSinogram sino;
};

HypSetup hyp_setup(const HypOptions& o, Report& rep, unsigned threads, bool phantom_given) {
  HypSetup s;
  s.f = make_hyp_phantom(o);
  if (!o.sinogram_in.empty()) {
    std::ifstream in(o.sinogram_in);
    if (!in) throw std::invalid_argument("sinogram-in: cannot open '" + o.sinogram_in + "'");
    s.sino = io::read_hyp_sinogram(in);
    s.known = phantom_given;
  } else {
    HypSinogramSpec spec{o.n_psi, o.S > 0.0 ? o.S : s.f.support_distance(), o.ds};
    s.sino = hyp_sinogram(s.f, spec, threads);
    std::ofstream out(rep.output(o.sinogram_out));
    io::write_sinogram(out, s.sino);
  }
  rep.metrics()["n_psi"] = s.sino.n_psi();
  rep.metrics()["n_s"] = s.sino.n_s();
  rep.metrics()["S"] = s.sino.S();
  return s;
}

/// Square grid of spacing eval_h covering d(0, x) <= eval_distance.
ImageGrid hyp_eval_grid(const HypOptions& o) {
  const double rz = std::tanh(o.eval_distance / 2.0);
  const int half = static_cast<int>(std::ceil(rz / o.eval_h));
  const int n = 2 * half + 1;
  return ImageGrid(n, n, -half * o.eval_h, -half * o.eval_h, o.eval_h, o.eval_h);
}

bool in_eval_region(const HypOptions& o, Point2 x) {
  return x.x * x.x + x.y * x.y < 1.0 && distance(DiskPoint(), DiskPoint(x.x, x.y), kHyp) <= o.eval_distance;
}

double hyp_deviation(const HypOptions& o, const GridFunction& a, const std::function<double(Point2)>& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.grid().size(); ++k) {
    Point2 x = a.grid().node(k);
    if (in_eval_region(o, x)) m = std::max(m, std::abs(a.values()[k] - b(x)));
  }
  return m;
}

GridFunction hyp_pointwise(const HypOptions& o, const ImageGrid& g, const std::function<double(DiskPoint)>& route,
                           unsigned threads) {
  return GridFunction::sample(g, [&](Point2 x) {
    if (x.x * x.x + x.y * x.y >= 0.99) return 0.0;
    return route(DiskPoint(x.x, x.y));
  }, INFINITY, threads);
}

GridFunction hyp_route(const std::string& name, const HypOptions& o, const HypSinogram& s, const ImageGrid& g,
                       unsigned threads) {
  if (name == "d1")
    return hyp_pointwise(o, g, [&](DiskPoint x) { return hyp_invert_d1(s, x, {o.dp, o.n_dir}); }, threads);
  if (name == "abel")
    return hyp_pointwise(o, g, [&](DiskPoint x) {
      return hyp_invert_theorem42(hyp_dual_profile(s, x, o.dt, o.n_dir), 1);
    }, threads);
  BcOptions bc;
  bc.n_backprojection = o.bp_n;
  bc.n_dir = o.n_dir;
  bc.stencil_h = o.stencil_h;
  return bc_invert(s, g, bc, threads);
}

int hyp_forward_cmd(const HypOptions& o, Report& rep, unsigned threads) {
  auto s = hyp_setup(o, rep, threads, true);
  const auto& f = s.f;
  double probe = hyp_xray_forward(f, Geodesic::from_normal(0.0, o.probe_s, kHyp));
  rep.metrics()["probe"] = {{"psi", 0.0}, {"s", o.probe_s}, {"value", probe}};
  if (f.kind() == HypPhantom::Kind::ball_indicator && f.center().modulus() == 0.0) {
    double oracle = o.probe_s < f.radius() ? 2.0 * f.amplitude() * std::acosh(std::cosh(f.radius()) / std::cosh(o.probe_s)) : 0.0;
    rep.metrics()["probe_oracle"] = oracle;
    rep.check("probe_vs_chord_oracle", std::abs(probe - oracle), o.tolerance > 0 ? o.tolerance : 1e-6);
  } else if (f.kind() == HypPhantom::Kind::zero) {
    double m = 0.0;
    for (double v : s.sino.values()) m = std::max(m, std::abs(v));
    rep.check_flag("zero_phantom_sinogram_is_zero", m == 0.0);
  }
  return 0;
}

int hyp_invert_cmd(const std::string& route, const HypOptions& o, Report& rep, unsigned threads, bool phantom_given) {
  auto s = hyp_setup(o, rep, threads, phantom_given);
  auto g = hyp_eval_grid(o);
  auto rec = hyp_route(route, o, s.sino, g, threads);
  write_field(rep, o.recon_out.empty() ? "recon_hyp_" + route + ".csv" : o.recon_out, rec);
  if (s.known) {
    double tol = o.tolerance > 0 ? o.tolerance : (route == "bc" ? 2e-2 : 1e-2);
    rep.check("max_error_relative_to_peak",
              relative(hyp_deviation(o, rec, [&](Point2 x) { return s.f(x); }), s.f.peak()), tol);
  }
  return 0;
}

int hyp_compare_cmd(const HypOptions& o, Report& rep, unsigned threads, bool phantom_given) {
  auto s = hyp_setup(o, rep, threads, phantom_given);
  auto g = hyp_eval_grid(o);
  auto d1 = hyp_route("d1", o, s.sino, g, threads);
  auto abel = hyp_route("abel", o, s.sino, g, threads);
  auto bc = hyp_route("bc", o, s.sino, g, threads);
  write_field(rep, "recon_hyp_d1.csv", d1);
  write_field(rep, "recon_hyp_abel.csv", abel);
  write_field(rep, "recon_hyp_bc.csv", bc);
  auto lookup = [](const GridFunction& a) {
    return [&a](Point2 x) {
      const auto& gr = a.grid();
      int i = static_cast<int>(std::lround((x.x - gr.x0()) / gr.dx()));
      int j = static_cast<int>(std::lround((x.y - gr.y0()) / gr.dy()));
      return a.at(i, j);
    };
  };
  double peak = s.known ? s.f.peak() : d1.max_abs();
  double abel_dev = hyp_deviation(o, abel, lookup(d1));
  double bc_dev = hyp_deviation(o, bc, lookup(d1));
  rep.metrics()["abel_vs_d1_max_deviation"] = abel_dev;
  rep.metrics()["bc_vs_d1_max_deviation"] = bc_dev;
  if (s.known) {
    auto exact = [&](Point2 x) { return s.f(x); };
    rep.metrics()["d1_error_relative"] = relative(hyp_deviation(o, d1, exact), peak);
    rep.metrics()["abel_error_relative"] = relative(hyp_deviation(o, abel, exact), peak);
    rep.metrics()["bc_error_relative"] = relative(hyp_deviation(o, bc, exact), peak);
  }
  rep.check("abel_vs_d1_relative_to_peak", relative(abel_dev, peak), o.tolerance > 0 ? o.tolerance : 1e-2);
  rep.check("bc_vs_d1_relative_to_peak", relative(bc_dev, peak), o.tolerance > 0 ? o.tolerance : 3e-2);
  return 0;
}

// ---------------------------------------------------------------- eigen

struct EigenOptions {
  std::string function = "exponential";
  double lambda = 1.3, b_theta = 0.0, region = 0.6, h = 1e-3;
  int n_side = 12, n_boundary = 64;
  double eigenvalue = std::numeric_limits<double>::quiet_NaN();
  double tolerance = -1.0;
  std::string richardson = "auto";
  std::string scan_out = "eigen_scan.csv";
};

int eigen_cmd(const EigenOptions& o, Report& rep) {
  const BoundaryPoint b(o.b_theta);
  const BoundaryQuadrature bq(o.n_boundary);
  const cplx mu(1.0, o.lambda);
  std::function<cplx(DiskPoint)> u;
  double natural = o.lambda * o.lambda + 1.0;
  if (o.function == "exponential") {
    u = [=](DiskPoint z) { return disk_exponential(mu, z, b); };
  } else if (o.function == "poisson") {
    u = [=](DiskPoint z) { return disk_exponential(2.0, z, b); };
    natural = 0.0;
  } else if (o.function == "spherical") {
    u = [=](DiskPoint z) { return spherical_function(o.lambda, z, bq); };
  } else if (o.function == "two-atom") {
    AnalyticFunctional T;
    T.add_atom(b, 1.0).add_atom(BoundaryPoint(o.b_theta + 3.6), cplx(0.0, 0.5));
    u = [=](DiskPoint z) { return eigenfunction_from_functional(T, mu, z, bq); };
  } else {
    u = [](DiskPoint) { return cplx(1.0); };
    natural = 0.0;
  }
  const double ev = std::isnan(o.eigenvalue) ? natural : o.eigenvalue;
  ScanOptions opt;
  opt.h = o.h;
  opt.n_side = o.n_side;
  opt.richardson = o.richardson == "on" || (o.richardson == "auto" && o.function == "poisson");
  auto samples = eigen_residual_samples(u, ev, o.region, opt);
  {
    std::ofstream out(rep.output(o.scan_out));
    io::write_scan(out, samples);
  }
  double worst = 0.0;
  for (const auto& s : samples) worst = std::max(worst, s.residual);
  rep.metrics()["eigenvalue"] = ev;
  rep.metrics()["richardson"] = opt.richardson;
  rep.metrics()["n_samples"] = samples.size();
  double tol = o.tolerance > 0 ? o.tolerance : (o.function == "poisson" ? 1e-5 : 1e-4);
  rep.check("max_relative_residual", worst, tol);
  return 0;
}

// ---------------------------------------------------------------- config

std::string find_config(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a == "--config" && i + 1 < argc) return argv[i + 1];
    if (a.rfind("--config=", 0) == 0) return a.substr(9);
  }
  return {};
}

/// `key = value` lines (# comments) become --key=value ahead of the command line.
std::vector<std::string> config_args(const std::string& path) {
  std::vector<std::string> out;
  if (path.empty()) return out;
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto trim = [](std::string s) {
      s.erase(0, s.find_first_not_of(" \t\r"));
      s.erase(s.find_last_not_of(" \t\r") + 1);
      return s;
    };
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (key.empty()) throw std::invalid_argument("config line " + std::to_string(lineno) + ": empty key");
    if (key == "config") throw std::invalid_argument("config: key 'config' cannot be nested");
    out.push_back("--" + key + "=" + value);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  Global g;
  FourierOptions fo;
  EuclidOptions eo;
  HypOptions ho;
  EigenOptions io_;

  CLI::App app{"Harmonic analysis and X-ray transforms on the Poincare disk"};
  app.option_defaults()->always_capture_default()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--threads", g.threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--out-dir", g.out_dir, "directory for CSV artifacts");
  app.add_option("--report", g.report, "also write the JSON report here");
  app.add_option("--config", g.config, "flat key = value file; flags override it");

  std::string cmd;
  CLI::App* active = nullptr;
  auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& desc, const std::string& id) {
    CLI::App* c = parent->add_subcommand(name, desc);
    c->fallthrough();
    c->callback([&, c, id] {
      cmd = id;
      active = c;
    });
    return c;
  };

  CLI::App* fourier = app.add_subcommand("fourier", "disk Fourier transform");
  fourier->require_subcommand(1);
  fourier->fallthrough();
  for (auto [name, desc] : std::vector<std::pair<std::string, std::string>>{
           {"forward", "tabulate f~(lambda, b)"},
           {"inverse", "evaluate the inversion formula from a spectral CSV"},
           {"roundtrip", "forward then inverse, with a convergence table over doubled Lambda"},
           {"plancherel", "compare the disk and spectral L2 norms"},
           {"range-check", "functional equation and coefficient conditions"}}) {
    CLI::App* c = leaf(fourier, name, desc, "fourier " + name);
    add_test_function_options(c, fo);
    c->add_option("--spectral-out", fo.spectral_out, "spectral CSV file name");
    c->add_option("--radius", fo.radius, "evaluation radius")->check(CLI::Range(0.0, 1.0));
    c->add_option("--tolerance", fo.tolerance, "pass threshold (default 1e-2, range-check 1e-7)");
    if (name == "roundtrip" || name == "plancherel")
      c->add_option("--levels", fo.levels, "number of doubled Lambda levels")->check(CLI::Range(1, 8));
    if (name == "inverse") {
      c->add_option("--spectral-in", fo.spectral_in, "spectral CSV to invert")->required();
      c->add_option("--values-out", fo.values_out, "output CSV of inverse values");
      c->add_flag("--compare", fo.compare, "compare against --test-fn");
    }
    if (name == "range-check") {
      c->add_option("--k", fo.k, "angular coefficient index");
      c->add_option("--lambda", fo.lambda, "spectral parameter on the grid");
      c->add_option("--z-re", fo.z_re, "evaluation point, real part");
      c->add_option("--z-im", fo.z_im, "evaluation point, imaginary part");
    }
  }

  CLI::App* radon = app.add_subcommand("radon", "X-ray transforms");
  radon->require_subcommand(1);
  radon->fallthrough();
  CLI::App* euclid = radon->add_subcommand("euclid", "lines in the plane");
  CLI::App* hyp = radon->add_subcommand("hyp", "geodesics in the disk (curvature -1)");
  for (CLI::App* area : {euclid, hyp}) {
    area->require_subcommand(1);
    area->fallthrough();
  }
  const std::vector<std::string> radon_subs{"forward", "invert-d1", "invert-frac", "invert-abel", "invert-bc", "compare"};
  for (const auto& name : radon_subs) {
    if (name != "invert-abel" && name != "invert-bc") {
      CLI::App* c = leaf(euclid, name, "Euclidean " + name, "radon euclid " + name);
      c->add_option("--phantom", eo.phantom, "phantom")->check(CLI::IsMember({"gaussian", "disk", "bump", "zero"}));
      c->add_option("--width", eo.width, "gaussian width")->check(CLI::PositiveNumber);
      c->add_option("--radius", eo.radius, "disk or bump radius")->check(CLI::PositiveNumber);
      c->add_option("--cx", eo.cx, "phantom center x");
      c->add_option("--cy", eo.cy, "phantom center y");
      c->add_option("--amplitude", eo.amplitude, "amplitude");
      c->add_option("--n-angles", eo.n_angles, "sinogram angles")->check(CLI::PositiveNumber);
      c->add_option("--P", eo.P, "offset window (0: phantom support radius)")->check(CLI::NonNegativeNumber);
      c->add_option("--dp", eo.dp, "offset step")->check(CLI::PositiveNumber);
      c->add_option("--grid-n", eo.grid_n, "fractional grid nodes per axis")->check(CLI::Range(2, 8192));
      c->add_option("--half-width", eo.half_width, "fractional grid half width (0: twice the support)")
          ->check(CLI::NonNegativeNumber);
      c->add_option("--padding", eo.padding, "zero-padding factor")->check(CLI::Range(2, 16));
      c->add_option("--eval-n", eo.eval_n, "d = 1 evaluation nodes per axis")->check(CLI::Range(2, 1024));
      c->add_option("--eval-half-width", eo.eval_half_width, "d = 1 evaluation half width (0: phantom scale)")
          ->check(CLI::NonNegativeNumber);
      c->add_option("--probe-p", eo.probe_p, "offset of the reported line integral");
      c->add_option("--tolerance", eo.tolerance, "pass threshold (default per command)");
      c->add_option("--sinogram-in", eo.sinogram_in, "read the sinogram instead of computing it");
      c->add_option("--sinogram-out", eo.sinogram_out, "sinogram CSV file name");
      c->add_option("--recon-out", eo.recon_out, "reconstruction CSV file name");
    } else {
      CLI::App* c = leaf(euclid, name, "not defined for lines", "radon euclid " + name);
      c->allow_extras();
    }
    if (name != "invert-frac") {
      CLI::App* c = leaf(hyp, name, "hyperbolic " + name, "radon hyp " + name);
      c->add_option("--phantom", ho.phantom, "phantom")->check(CLI::IsMember({"bump", "ball", "translated-bump", "zero"}));
      c->add_option("--R", ho.R, "radius in distance (0: 1.5 bump, 1 ball, 0.8 translated)")
          ->check(CLI::NonNegativeNumber);
      c->add_option("--cx", ho.cx, "center x (disk coordinates)");
      c->add_option("--cy", ho.cy, "center y (disk coordinates)");
      c->add_option("--amplitude", ho.amplitude, "amplitude");
      c->add_option("--n-psi", ho.n_psi, "sinogram angles")->check(CLI::PositiveNumber);
      c->add_option("--S", ho.S, "distance window (0: phantom support)")->check(CLI::NonNegativeNumber);
      c->add_option("--ds", ho.ds, "distance step")->check(CLI::PositiveNumber);
      c->add_option("--n-dir", ho.n_dir, "geodesics per dual average")->check(CLI::PositiveNumber);
      c->add_option("--dp", ho.dp, "dual distance step")->check(CLI::PositiveNumber);
      c->add_option("--dt", ho.dt, "cosh-distance step of the Abel route")->check(CLI::PositiveNumber);
      c->add_option("--eval-distance", ho.eval_distance, "evaluation region d(0, x) <=")->check(CLI::PositiveNumber);
      c->add_option("--eval-h", ho.eval_h, "evaluation grid spacing")->check(CLI::PositiveNumber);
      c->add_option("--stencil-h", ho.stencil_h, "Laplacian step of the backprojection route")->check(CLI::PositiveNumber);
      c->add_option("--bp-n", ho.bp_n, "backprojection grid nodes per axis")->check(CLI::Range(8, 8192));
      c->add_option("--probe-s", ho.probe_s, "distance of the reported geodesic integral")->check(CLI::NonNegativeNumber);
      c->add_option("--tolerance", ho.tolerance, "pass threshold (default per command)");
      c->add_option("--sinogram-in", ho.sinogram_in, "read the sinogram instead of computing it");
      c->add_option("--sinogram-out", ho.sinogram_out, "sinogram CSV file name");
      c->add_option("--recon-out", ho.recon_out, "reconstruction CSV file name");
    } else {
      CLI::App* c = leaf(hyp, name, "not defined for geodesics", "radon hyp " + name);
      c->allow_extras();
    }
  }

  CLI::App* eigen = leaf(&app, "eigen", "Laplace eigenfunction residual scan", "eigen");
  eigen->set_help_flag("--help", "print this help message and exit");
  eigen->add_option("--function", io_.function, "function to scan")
      ->check(CLI::IsMember({"exponential", "poisson", "spherical", "two-atom", "constant"}));
  eigen->add_option("--lambda", io_.lambda, "spectral parameter");
  eigen->add_option("--b-theta", io_.b_theta, "boundary point angle");
  eigen->add_option("--eigenvalue", io_.eigenvalue, "E with L u = -E u (default: the function's own)");
  eigen->add_option("--region", io_.region, "scan radius")->check(CLI::Range(0.0, 0.99));
  eigen->add_option("--h", io_.h, "finite-difference step")->check(CLI::PositiveNumber);
  eigen->add_option("--n-side", io_.n_side, "lattice nodes per half axis")->check(CLI::PositiveNumber);
  eigen->add_option("--n-boundary", io_.n_boundary, "boundary nodes")->check(CLI::PositiveNumber);
  eigen->add_option("--richardson", io_.richardson, "Richardson stencil")->check(CLI::IsMember({"auto", "on", "off"}));
  eigen->add_option("--tolerance", io_.tolerance, "pass threshold (default 1e-4, poisson 1e-5)");
  eigen->add_option("--scan-out", io_.scan_out, "scan CSV file name");

  std::vector<std::string> args;
  try {
    auto extra = config_args(find_config(argc, argv));
    // subcommand names first, then config entries, then the user's flags
    int i = 1;
    std::vector<std::string> head, tail;
    for (; i < argc && argv[i][0] != '-'; ++i) head.emplace_back(argv[i]);
    for (; i < argc; ++i) tail.emplace_back(argv[i]);
    args = head;
    args.insert(args.end(), extra.begin(), extra.end());
    args.insert(args.end(), tail.begin(), tail.end());
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    Report rep(cmd, g);
    rep.config(*active);
    const CLI::Option* phantom_opt = active->get_option_no_throw("--phantom");
    const bool phantom_given = phantom_opt != nullptr && phantom_opt->count() > 0;
    int rc = 0;
    if (cmd == "fourier forward") rc = fourier_forward_cmd(fo, rep, g.threads);
    else if (cmd == "fourier inverse") rc = fourier_inverse_cmd(fo, rep);
    else if (cmd == "fourier roundtrip") rc = fourier_roundtrip_cmd(fo, rep, g.threads);
    else if (cmd == "fourier plancherel") rc = fourier_plancherel_cmd(fo, rep, g.threads);
    else if (cmd == "fourier range-check") rc = fourier_range_cmd(fo, rep, g.threads);
    else if (cmd == "radon euclid forward") rc = euclid_forward_cmd(eo, rep, g.threads);
    else if (cmd == "radon euclid invert-d1") rc = euclid_d1_cmd(eo, rep, g.threads, phantom_given);
    else if (cmd == "radon euclid invert-frac") rc = euclid_frac_cmd(eo, rep, g.threads, phantom_given);
    else if (cmd == "radon euclid compare") rc = euclid_compare_cmd(eo, rep, g.threads, phantom_given);
    else if (cmd == "radon hyp forward") rc = hyp_forward_cmd(ho, rep, g.threads);
    else if (cmd == "radon hyp invert-d1") rc = hyp_invert_cmd("d1", ho, rep, g.threads, phantom_given);
    else if (cmd == "radon hyp invert-abel") rc = hyp_invert_cmd("abel", ho, rep, g.threads, phantom_given);
    else if (cmd == "radon hyp invert-bc") rc = hyp_invert_cmd("bc", ho, rep, g.threads, phantom_given);
    else if (cmd == "radon hyp compare") rc = hyp_compare_cmd(ho, rep, g.threads, phantom_given);
    else if (cmd == "eigen") rc = eigen_cmd(io_, rep);
    else if (cmd == "radon euclid invert-abel" || cmd == "radon euclid invert-bc")
      throw std::invalid_argument(cmd.substr(13) + " applies to the hyperbolic transform only");
    else if (cmd == "radon hyp invert-frac")
      throw std::invalid_argument("invert-frac applies to the Euclidean transform only; use invert-abel or invert-bc");
    else
      throw std::invalid_argument("unknown command '" + cmd + "'");
    if (rc != 0) return rc;
    return rep.finish();
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
