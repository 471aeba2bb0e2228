#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "webscatter/io.hpp"
#include "webscatter/oracle.hpp"
#include "webscatter/pipeline.hpp"

using namespace webscatter;

namespace {

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
  } else {
    atomic_write(out_path, content);
  }
}

std::string levels_to_json(const std::vector<DiscreteLevel>& levels) {
  std::ostringstream os;
  os.precision(17);
  os << "[\n";
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const auto& lv = levels[i];
    os << "  {\"omega_hat\": [" << std::real(lv.omega_hat) << ", "
       << std::imag(lv.omega_hat) << "], \"lambda_hat\": " << lv.lambda_hat
       << ", \"provenance\": \"" << lv.provenance << "\", \"M\": [";
    for (int r = 0; r < lv.m_re.rows(); ++r) {
      os << (r ? ", [" : "[");
      for (int c = 0; c < lv.m_re.cols(); ++c)
        os << (c ? ", " : "") << lv.m_re(r, c);
      os << "]";
    }
    os << "], \"energies\": [";
    for (std::size_t e = 0; e < lv.energy.size(); ++e)
      os << (e ? ", " : "") << lv.energy[e];
    os << "]}" << (i + 1 < levels.size() ? "," : "") << "\n";
  }
  os << "]\n";
  return os.str();
}

int run_oracle_check(const Model& model) {
  int failures = 0;
  auto report = [&](const std::string& name, bool ok, double err) {
    std::printf("%-34s %s  (max dev %.3e)\n", name.c_str(),
                ok ? "PASS" : "FAIL", err);
    if (!ok) ++failures;
  };

  std::vector<DiscreteLevel> levels = compute_levels(model);
  const int n_trunc = 1200;
  auto trunc = truncated_eigenvalues(model.sys, n_trunc);
  double ev_err = 0.0;
  bool ev_ok = true;
  for (const auto& lv : levels) {
    if (lv.on_circle) continue;
    double best = 1e9;
    for (const auto& t : trunc)
      best = std::min(best, std::abs(t.lambda - lv.lambda_hat));
    ev_err = std::max(ev_err, best);
  }
  for (const auto& t : trunc) {
    double best = 1e9;
    for (const auto& lv : levels)
      best = std::min(best, std::abs(t.lambda - lv.lambda_hat));
    ev_err = std::max(ev_err, best);
  }
  ev_ok = ev_err < 1e-8;
  report("levels vs truncated eigenvalues", ev_ok, ev_err);

  double s_err = 0.0;
  for (int j = 1; j <= 8; ++j) {
    const cplx w = std::polar(1.0, kPi * j / 9.0 + 0.0371);
    ScatteringSample smp = scattering_sample(model, w);
    if (smp.flagged) continue;
    for (int s = 0; s < model.channels(); ++s) {
      if (!smp.open[s]) continue;
      auto osc = scattering_by_linear_solve(model, s, w, 400);
      for (int g = 0; g < model.channels(); ++g) {
        const double d = smp.open[g]
                             ? std::abs(osc[g] - smp.s(g, s))
                             : std::abs(std::abs(osc[g]) -
                                        std::abs(smp.s(g, s)));
        s_err = std::max(s_err, d);
      }
    }
  }
  report("scattering vs radiation solve", s_err < 1e-8, s_err);

  double m_err = 0.0;
  for (const auto& lv : levels) {
    if (lv.on_circle) continue;
    Eigen::MatrixXd chk = residue_by_eigenvector(model, lv.omega_hat, 800);
    m_err = std::max(m_err, (chk - lv.m_re).norm());
  }
  report("residues vs eigenvector check", m_err < 1e-5, m_err);
  return failures ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"direct and inverse scattering for web-like Jacobi systems"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "worker threads (default: env/1)");

  std::string system_path, data_path, out_path;
  int grid = 8192, segnodes = 48, kmax = 5;

  auto* band = app.add_subcommand("band", "print the spectral chart");
  band->add_option("--system", system_path)->required();
  band->add_option("--out", out_path);

  auto* direct_cmd = app.add_subcommand("direct", "sample the s matrix");
  direct_cmd->add_option("--system", system_path)->required();
  direct_cmd->add_option("--grid", grid);
  direct_cmd->add_option("--out", out_path);

  auto* spectrum_cmd = app.add_subcommand("spectrum", "discrete levels");
  spectrum_cmd->add_option("--system", system_path)->required();
  spectrum_cmd->add_option("--out", out_path);

  auto* export_cmd = app.add_subcommand("export", "export spectral data");
  export_cmd->add_option("--system", system_path)->required();
  export_cmd->add_option("--grid", grid);
  export_cmd->add_option("--segnodes", segnodes);
  export_cmd->add_option("--out", out_path)->required();

  auto* invert_cmd = app.add_subcommand("invert", "recover coefficients");
  invert_cmd->add_option("--data", data_path)->required();
  invert_cmd->add_option("--kmax", kmax)->required();
  invert_cmd->add_option("--out", out_path);

  auto* rt_cmd = app.add_subcommand("roundtrip", "full forward + inverse run");
  rt_cmd->add_option("--system", system_path)->required();
  rt_cmd->add_option("--kmax", kmax);
  rt_cmd->add_option("--grid", grid);
  rt_cmd->add_option("--segnodes", segnodes);

  auto* oracle_cmd = app.add_subcommand("oracle-check", "cross-check table");
  oracle_cmd->add_option("--system", system_path)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (band->parsed()) {
      Model model = Model::build(load_system(system_path));
      emit(out_path, chart_to_json(model.chart));
    } else if (direct_cmd->parsed()) {
      Model model = Model::build(load_system(system_path));
      const int c = model.channels();
      std::ostringstream os;
      os.precision(17);
      os << "omega_re,omega_im";
      for (int g = 0; g < c; ++g)
        for (int s = 0; s < c; ++s)
          os << ",s" << g << s << "_re,s" << g << s << "_im";
      for (int s = 0; s < c; ++s) os << ",open" << s;
      os << ",abs_det_t,flagged\n";
      for (int j = 0; j < grid; ++j) {
        const cplx w = std::polar(1.0, 2.0 * kPi * (j + 0.5) / grid);
        ScatteringSample smp = scattering_sample(model, w);
        os << std::real(w) << "," << std::imag(w);
        for (int g = 0; g < c; ++g)
          for (int s = 0; s < c; ++s)
            os << "," << std::real(smp.s(g, s)) << ","
               << std::imag(smp.s(g, s));
        for (int s = 0; s < c; ++s) os << "," << (smp.open[s] ? 1 : 0);
        os << "," << smp.abs_det_t << "," << (smp.flagged ? 1 : 0) << "\n";
      }
      emit(out_path, os.str());
    } else if (spectrum_cmd->parsed()) {
      Model model = Model::build(load_system(system_path));
      emit(out_path, levels_to_json(compute_levels(model)));
    } else if (export_cmd->parsed()) {
      Model model = Model::build(load_system(system_path));
      ExportConfig cfg{grid, segnodes, threads};
      save_dataset(export_spectral_data(model, compute_levels(model), cfg),
                   out_path);
    } else if (invert_cmd->parsed()) {
      SpectralDataset d = load_dataset(data_path);
      InvertResult res = invert_dataset(d, kmax, threads);
      std::ostringstream os;
      os.precision(17);
      os << "[\n";
      for (int s = 0; s < d.channel_count(); ++s) {
        os << "  {\"id\": \"" << d.channels[s].id << "\", \"diag\": [";
        for (int k = 0; k < kmax; ++k)
          os << (k ? ", " : "") << res.channels[s].diag[k];
        os << "], \"hop\": [";
        for (int k = 0; k < kmax; ++k)
          os << (k ? ", " : "") << res.channels[s].hop[k];
        os << "]}" << (s + 1 < d.channel_count() ? "," : "") << "\n";
      }
      os << "]\n";
      emit(out_path, os.str());
    } else if (rt_cmd->parsed()) {
      ExportConfig cfg{grid, segnodes, threads};
      RoundtripResult res = roundtrip(load_system(system_path), kmax, cfg);
      std::printf("max coefficient error: %.3e\n", res.max_error);
      if (res.max_error > 1e-5) return 2;
    } else if (oracle_cmd->parsed()) {
      return run_oracle_check(Model::build(load_system(system_path)));
    }
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
