#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "abho/abho.hpp"

namespace abho::cli {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string num(cplx v) {
  std::string im = num(v.imag());
  if (im.front() != '-') im.insert(im.begin(), '+');
  return num(v.real()) + im + "i";
}

std::string num(Vec2 v) { return num(v.x1) + "," + num(v.x2); }

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) return parts;
    start = pos + 1;
  }
}

Vec2 parse_vec(const std::string& text, const char* flag) {
  const auto parts = split(text, ',');
  if (parts.size() != 2) throw Error(ErrorKind::InvalidParameter, std::string(flag) + " expects a,b");
  return {parse_double(parts[0]), parse_double(parts[1])};
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  for (const auto part : split(text, ',')) out.push_back(parse_double(part));
  return out;
}

int parse_count(std::string_view text) {
  const double v = parse_double(text);
  if (v != std::floor(v) || v < 1 || v > 1e6) {
    throw Error(ErrorKind::InvalidParameter, "grid counts must be positive integers");
  }
  return static_cast<int>(v);
}

GridSpec parse_grid(const std::string& text) {
  const auto p = split(text, ',');
  if (p.size() != 6) throw Error(ErrorKind::InvalidParameter, "--xgrid expects x0,x1,nx,y0,y1,ny");
  return {parse_double(p[0]), parse_double(p[1]), parse_count(p[2]),
          parse_double(p[3]), parse_double(p[4]), parse_count(p[5])};
}

struct Common {
  std::string config_path;
  std::optional<double> alpha, flux_b, omega, damping_B, cutoff_eps;
  std::optional<int> order_N;
  std::string output;
  unsigned threads = 0;

  void attach(CLI::App* app) {
    app->add_option("--config", config_path, "key=value config file");
    app->add_option("--alpha", alpha, "override alpha");
    app->add_option("--flux-b", flux_b, "override flux_b");
    app->add_option("--omega", omega, "override omega");
    app->add_option("--damping-B", damping_B, "override damping_B");
    app->add_option("--cutoff-eps", cutoff_eps, "override cutoff_eps");
    app->add_option("--order-N", order_N, "override order_N");
    app->add_option("-o,--output", output, "output path (stdout when omitted)");
    app->add_option("--threads", threads, "worker threads, 0 = hardware concurrency");
  }

  Config config() const {
    Config cfg = config_path.empty() ? Config{} : read_config_file(config_path);
    if (alpha) cfg.alpha = *alpha;
    if (flux_b) cfg.flux_b = *flux_b;
    if (omega) cfg.omega = *omega;
    if (damping_B) cfg.damping_B = *damping_B;
    if (cutoff_eps) cfg.cutoff_eps = *cutoff_eps;
    if (order_N) cfg.order_N = *order_N;
    return validate_config(cfg);
  }
};

struct QuadOptions {
  QuadratureSpec q;

  void attach(CLI::App* app) {
    app->add_option("--tail-tol", q.tail_tol, "Gaussian truncation tolerance");
    app->add_option("--osc-points", q.osc_points_per_period, "nodes per phase period");
    app->add_option("--max-points", q.max_points_per_axis, "node cap per axis");
    app->add_option("--refine-tol", q.refine_ratio_tol, "relative change accepted on refinement");
  }
};

// Writes to the -o file when given, otherwise to the supplied stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw Error(ErrorKind::InvalidParameter, "cannot write '" + path + "'");
      stream_ = &file_;
    }
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

void write_flow_csv(std::ostream& os, const PhasePoint& p, const Config& cfg, double t0, double t1, int steps) {
  os << "s,x1,x2,xi1,xi2,h,L\n";
  for (int i = 0; i <= steps; ++i) {
    const double s = steps == 0 ? t0 : t0 + (t1 - t0) * i / steps;
    const FlowState st = flow(s, p, cfg);
    os << num(s) << ',' << num(st.x) << ',' << num(st.xi) << ',' << num(hamiltonian(st.x, st.xi, cfg)) << ','
       << num(kinetic_angular_momentum(st.x, st.xi, cfg)) << '\n';
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Semiclassical propagator of the harmonic oscillator in an Aharonov-Bohm field"};
  app.name("abho");
  app.require_subcommand(1);

  Common common;
  QuadOptions quad;
  std::string y_s, eta_s, x_s, eta0_s, grid_s, alphas_s, rho_center_s;
  double t = 0.0, t0 = 0.0, t1 = 0.0, fd_t = 1e-6, fd_x = 2e-4, rho_radius = 0.0;
  int steps = 200, n_max = 60, m_max = 60, outer = 0;
  bool brute = false;
  std::optional<double> b_ratio;

  auto* flow_cmd = app.add_subcommand("flow", "sample the classical flow");
  flow_cmd->add_option("--t0", t0, "start time")->required();
  flow_cmd->add_option("--t1", t1, "end time")->required();
  flow_cmd->add_option("--steps", steps, "number of intervals");
  flow_cmd->add_option("--y", y_s, "initial position a,b")->required();
  flow_cmd->add_option("--eta", eta_s, "initial momentum a,b")->required();

  auto* action_cmd = app.add_subcommand("action", "closed-form action with winding lift");
  auto* z_cmd = app.add_subcommand("zmatrix", "det Z, sqrt det Z and eigenvalues");
  for (auto* c : {action_cmd, z_cmd}) {
    c->add_option("--t", t, "time")->required();
    c->add_option("--y", y_s, "position a,b")->required();
    c->add_option("--eta", eta_s, "momentum a,b")->required();
  }

  auto* kernel_cmd = app.add_subcommand("kernel", "U0(t, x, y) on a grid of x");
  kernel_cmd->add_option("--t", t, "time")->required();
  kernel_cmd->add_option("--y", y_s, "source point a,b")->required();
  kernel_cmd->add_option("--xgrid", grid_s, "x0,x1,nx,y0,y1,ny")->required();
  quad.attach(kernel_cmd);

  auto* residual_cmd = app.add_subcommand("residual", "(i alpha d/dt - H) U0 by finite differences");
  residual_cmd->add_option("--fd-t", fd_t, "time step");
  residual_cmd->add_option("--fd-x", fd_x, "space step");
  quad.attach(residual_cmd);

  auto* mehler_cmd = app.add_subcommand("mehler", "stationary eta and the Mehler-type leading term");
  auto* spectral_cmd = app.add_subcommand("spectral", "exact propagator from the channel expansion");
  spectral_cmd->add_option("--nmax", n_max, "radial cap (eigen-sum only)");
  spectral_cmd->add_option("--mmax", m_max, "angular cap");
  for (auto* c : {residual_cmd, mehler_cmd, spectral_cmd}) {
    c->add_option("--t", t, "time")->required();
    c->add_option("--x", x_s, "target point a,b")->required();
    c->add_option("--y", y_s, "source point a,b")->required();
  }

  auto* filtered_cmd = app.add_subcommand("filtered", "stationary phase in (y, eta) against a test bump");
  filtered_cmd->add_option("--t", t, "time")->required();
  filtered_cmd->add_option("--x", x_s, "target point a,b")->required();
  filtered_cmd->add_option("--eta0", eta0_s, "frequency a,b")->required();
  filtered_cmd->add_option("--rho-center", rho_center_s, "bump centre a,b")->required();
  filtered_cmd->add_option("--rho-radius", rho_radius, "bump radius")->required();
  filtered_cmd->add_flag("--brute", brute, "also run the double quadrature");
  filtered_cmd->add_option("--outer", outer, "outer intervals for --brute, 0 = automatic");
  quad.attach(filtered_cmd);

  auto* conv_cmd = app.add_subcommand("convergence", "alpha sweep of kernel_u0 against the leading term and the exact kernel");
  conv_cmd->add_option("--alphas", alphas_s, "comma-separated alphas")->required();
  conv_cmd->add_option("--t", t, "time")->required();
  conv_cmd->add_option("--x", x_s, "target point a,b")->required();
  conv_cmd->add_option("--y", y_s, "source point a,b")->required();
  conv_cmd->add_option("--b-ratio", b_ratio, "use flux_b = ratio * alpha per row");
  quad.attach(conv_cmd);

  auto* figure_cmd = app.add_subcommand("figure", "trajectory CSVs: collision orbit and ellipse");
  figure_cmd->add_option("--steps", steps, "samples per trajectory");

  for (auto* c : app.get_subcommands([](const CLI::App*) { return true; })) common.attach(c);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return 0;
    }
    err << "abho: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    const Config cfg = common.config();
    // figure treats -o as a directory
    Sink sink(figure_cmd->parsed() ? std::string() : common.output, out);
    std::ostream& os = *sink;

    if (flow_cmd->parsed()) {
      if (steps < 0) throw Error(ErrorKind::InvalidParameter, "--steps must be >= 0");
      write_flow_csv(os, {parse_vec(y_s, "--y"), parse_vec(eta_s, "--eta")}, cfg, t0, t1, steps);
    } else if (action_cmd->parsed()) {
      const PhasePoint p{parse_vec(y_s, "--y"), parse_vec(eta_s, "--eta")};
      const ActionValue a = action(t, p, cfg);
      os << "S=" << num(a.s_value) << "\nell=" << a.winding_l << "\nlift=" << num(a.arg_lift) << '\n';
    } else if (z_cmd->parsed()) {
      const PhasePoint p{parse_vec(y_s, "--y"), parse_vec(eta_s, "--eta")};
      const ZValue z = sqrt_det_z_branch(t, p, cfg);
      const auto [m1, m2] = z_eigenvalues(t, p, cfg);
      os << "det_z=" << num(z.det_z) << "\nsqrt_det_z=" << num(z.sqrt_det_z) << "\nmu1=" << num(m1)
         << "\nmu2=" << num(m2) << '\n';
    } else if (kernel_cmd->parsed()) {
      validate_quadrature(quad.q);
      const auto xs = make_grid(parse_grid(grid_s));
      const auto rows = kernel_grid(t, xs, parse_vec(y_s, "--y"), cfg, quad.q, common.threads);
      os << "x1,x2,re,im,abs,est_error,n_points\n";
      int failed = 0;
      for (const auto& r : rows) {
        os << num(r.x) << ',';
        if (r.sample) {
          const auto& s = *r.sample;
          os << num(s.value.real()) << ',' << num(s.value.imag()) << ',' << num(std::abs(s.value)) << ','
             << num(s.est_error) << ',' << s.n_points << '\n';
        } else {
          os << "nan,nan,nan,nan,0\n";
          if (failed++ == 0) err << "abho: sample at " << num(r.x) << ": " << r.error->what() << '\n';
        }
      }
      if (failed > 0) err << "abho: " << failed << " grid samples failed\n";
    } else if (residual_cmd->parsed()) {
      validate_quadrature(quad.q);
      const ResidualValue r = pde_residual(t, parse_vec(x_s, "--x"), parse_vec(y_s, "--y"), cfg, quad.q, fd_t, fd_x);
      os << "residual=" << num(r.residual) << "\nkernel=" << num(r.kernel) << "\nrelative=" << num(r.relative) << '\n';
    } else if (mehler_cmd->parsed()) {
      const Vec2 x = parse_vec(x_s, "--x"), y = parse_vec(y_s, "--y");
      const StationaryEta s = stationary_eta(t, x, y, cfg);
      os << "eta_star=" << num(s.eta_star) << "\nS=" << num(s.s_at_star) << "\nell=" << s.winding_l
         << "\nleading=" << num(mehler_leading(t, x, y, cfg)) << '\n';
    } else if (filtered_cmd->parsed()) {
      validate_quadrature(quad.q);
      const Vec2 x = parse_vec(x_s, "--x"), eta0 = parse_vec(eta0_s, "--eta0");
      const TestBump rho(parse_vec(rho_center_s, "--rho-center"), rho_radius, eta0, cfg);
      const FilteredLeading lead = filtered_integral_leading(t, x, eta0, rho, cfg);
      os << "y0=" << num(lead.y0) << "\nm=" << lead.morse_m << "\ndet_xty=" << num(lead.det_xty)
         << "\noutside_support=" << (lead.outside_support ? 1 : 0) << "\nleading=" << num(lead.value) << '\n';
      if (brute) {
        const FilteredBrute b = filtered_integral_brute(t, x, eta0, rho, cfg, quad.q, outer, common.threads);
        os << "brute=" << num(b.value) << "\nouter_intervals=" << b.outer_intervals
           << "\nmax_inner_error=" << num(b.max_inner_error) << '\n';
      }
    } else if (spectral_cmd->parsed()) {
      const SpectralValue v =
          exact_propagator(t, parse_vec(x_s, "--x"), parse_vec(y_s, "--y"), cfg, {n_max, m_max, 1e-8});
      os << "value=" << num(v.value) << "\ntail_estimate=" << num(v.tail_estimate) << '\n';
    } else if (conv_cmd->parsed()) {
      validate_quadrature(quad.q);
      const Vec2 x = parse_vec(x_s, "--x"), y = parse_vec(y_s, "--y");
      os << "alpha,flux_b,kernel_re,kernel_im,leading_re,leading_im,exact_re,exact_im,err_leading,err_exact\n";
      for (const double a : parse_list(alphas_s)) {
        Config c = cfg;
        c.alpha = a;
        if (b_ratio) c.flux_b = *b_ratio * a;
        validate_config(c);
        const cplx k = kernel_u0(t, x, y, c, quad.q).value;
        const cplx lead = mehler_leading(t, x, y, c);
        std::optional<cplx> exact;
        try {
          const SpectralTruncation trunc{n_max, std::max(m_max, static_cast<int>(std::ceil(40.0 / a))), 1e-8};
          exact = exact_propagator(t, x, y, c, trunc).value;
        } catch (const Error& e) {
          err << "abho: alpha=" << num(a) << ": " << e.what() << '\n';
        }
        const double nan = std::nan("");
        os << num(a) << ',' << num(c.flux_b) << ',' << num(k.real()) << ',' << num(k.imag()) << ','
           << num(lead.real()) << ',' << num(lead.imag()) << ',' << num(exact ? exact->real() : nan) << ','
           << num(exact ? exact->imag() : nan) << ',' << num(std::abs(k - lead) / std::abs(lead)) << ','
           << num(exact ? std::abs(k - *exact) / std::abs(*exact) : nan) << '\n';
      }
    } else if (figure_cmd->parsed()) {
      if (steps < 1) throw Error(ErrorKind::InvalidParameter, "--steps must be >= 1");
      const std::string dir = common.output.empty() ? "." : common.output;
      // L = 0: y^eta = b, moving inwards so the orbit reaches the origin
      const PhasePoint radial{{1.0, 0.0}, {-0.5, cfg.flux_b}};
      const double tc = *collision_time(radial, cfg);
      const PhasePoint elliptic{{1.0, 0.0}, {0.3, cfg.flux_b + 0.8}};
      std::ofstream a(dir + "/trajectory_collision.csv"), b(dir + "/trajectory_ellipse.csv");
      if (!a || !b) throw Error(ErrorKind::InvalidParameter, "cannot write into '" + dir + "'");
      write_flow_csv(a, radial, cfg, 0.0, tc * (1.0 - 1e-9), steps);
      write_flow_csv(b, elliptic, cfg, 0.0, 2.0 * std::numbers::pi / cfg.omega, steps);
      os << "collision_time=" << num(tc) << "\nmin_radius_ellipse="
         << num(min_radius(2.0 * std::numbers::pi / cfg.omega, elliptic, cfg)) << '\n';
    }
    os.flush();
  } catch (const Error& e) {
    err << "abho: " << e.what() << '\n';
    const bool usage = e.kind() == ErrorKind::InvalidParameter || e.kind() == ErrorKind::NotImplemented;
    return usage ? 2 : 3;
  }
  return 0;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace abho::cli
