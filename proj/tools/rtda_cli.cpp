#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "rtda/csv_io.hpp"
#include "rtda/denoise.hpp"
#include "rtda/experiment.hpp"
#include "rtda/filtration.hpp"
#include "rtda/geometry.hpp"
#include "rtda/persistence.hpp"
#include "rtda/synth.hpp"

namespace {

void emit(const std::string& path, const std::string& contents) {
  if (path.empty() || path == "-") {
    std::cout << contents;
  } else {
    rtda::write_file(path, contents);
  }
}

rtda::SignalFrame load_signal(const std::string& path) {
  std::istringstream in(rtda::read_file(path));
  return rtda::read_signal_csv(in);
}

template <typename Writer, typename T>
std::string to_csv(Writer writer, const T& value) {
  std::ostringstream out;
  writer(out, value);
  return out.str();
}

double parse_snr(const std::string& text) { return rtda::parse_number(text); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Flow-aware ellipsoidal filtration and topological denoising of recurrent signals"};
  app.require_subcommand(1);

  // synth
  auto* synth = app.add_subcommand("synth", "Generate the synthetic recurrent signal, optionally with noise");
  rtda::SignalSpec spec;
  std::string synth_snr = "inf";
  std::uint64_t synth_seed = 0;
  std::string synth_out;
  std::string synth_clean;
  synth->add_option("--n", spec.n, "Number of samples")->capture_default_str();
  synth->add_option("--t-max", spec.t_max, "Duration in seconds")->capture_default_str();
  synth->add_option("--f-start", spec.f_start, "Start frequency (Hz)")->capture_default_str();
  synth->add_option("--f-end", spec.f_end, "End frequency (Hz)")->capture_default_str();
  synth->add_option("--snr", synth_snr, "Per-channel SNR in dB, or inf")->capture_default_str();
  synth->add_option("--seed", synth_seed, "Noise seed")->capture_default_str();
  synth->add_option("--output,-o", synth_out, "Noisy signal CSV (stdout if omitted)");
  synth->add_option("--clean", synth_clean, "Also write the clean signal CSV here");

  // ph
  auto* ph = app.add_subcommand("ph", "Persistence diagram (H0, H1) of a signal's state-space point cloud");
  std::string ph_input;
  std::string ph_output;
  std::string ph_complex;
  std::string ph_mode = "ellipsoidal";
  rtda::DenoiseParams ph_params;
  ph->add_option("--input,-i", ph_input, "Signal CSV")->required();
  ph->add_option("--output,-o", ph_output, "Diagram CSV (stdout if omitted)");
  ph->add_option("--complex", ph_complex, "Also write the filtered complex CSV here");
  ph->add_option("--mode", ph_mode, "ellipsoidal or spherical")->capture_default_str();
  ph->add_option("--rho", ph_params.rho, "Ellipsoid axis ratio")->capture_default_str();
  ph->add_option("--gradient-window", ph_params.gradient_window, "Gradient window N")->capture_default_str();
  ph->add_option("--alpha-max", ph_params.alpha_max, "Truncate the filtration at this scale");

  // denoise
  auto* dn = app.add_subcommand("denoise", "Denoise a signal CSV, or a freshly generated noisy synthetic signal");
  std::string dn_input;
  std::string dn_output;
  std::string dn_mode = "ellipsoidal";
  std::string dn_snr = "20";
  std::uint64_t dn_seed = 0;
  rtda::DenoiseParams dn_params;
  dn->add_option("--input,-i", dn_input, "Signal CSV (synthetic signal if omitted)");
  dn->add_option("--output,-o", dn_output, "Denoised signal CSV (stdout if omitted)");
  dn->add_option("--mode", dn_mode, "ellipsoidal, spherical, knn, moving_average or adaptive_moving_average")
      ->capture_default_str();
  dn->add_option("--k", dn_params.k, "Neighbour count for knn")->capture_default_str();
  dn->add_option("--window", dn_params.window, "Moving-average window")->capture_default_str();
  dn->add_option("--segment", dn_params.segment, "Adaptive segment length")->capture_default_str();
  dn->add_option("--rho", dn_params.rho, "Ellipsoid axis ratio")->capture_default_str();
  std::string dn_rule = "containment";
  dn->add_option("--neighbourhood", dn_rule, "containment or edge")->capture_default_str();
  dn->add_option("--seed", dn_seed, "Noise seed for the synthetic signal")->capture_default_str();
  dn->add_option("--snr", dn_snr, "SNR in dB for the synthetic signal")->capture_default_str();

  // experiment
  auto* ex = app.add_subcommand("experiment", "Run the RMSE-vs-SNR sweep described by a JSON config");
  std::string ex_config;
  std::string ex_outdir;
  ex->add_option("--config,-c", ex_config, "Experiment JSON")->required();
  ex->add_option("--output-dir", ex_outdir, "Override output_dir from the config");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*synth) {
      const auto clean = rtda::generate_signal(spec);
      const auto noisy = rtda::add_noise(clean, {parse_snr(synth_snr), synth_seed});
      if (!synth_clean.empty()) rtda::write_file(synth_clean, to_csv(rtda::write_signal_csv, clean));
      emit(synth_out, to_csv(rtda::write_signal_csv, noisy));
      return 0;
    }

    if (*ph) {
      ph_params.mode = rtda::parse_filter_mode(ph_mode);
      if (!rtda::is_topological(ph_params.mode)) throw std::invalid_argument("ph: --mode must be ellipsoidal or spherical");
      ph_params.validate();
      const auto frame = load_signal(ph_input);
      const rtda::GradientConfig grad{ph_params.gradient_window, ph_params.degenerate_tolerance};
      const auto ellipsoids = ph_params.mode == rtda::FilterMode::ellipsoidal
                                  ? rtda::flow_ellipsoids(frame, ph_params.rho, grad)
                                  : rtda::spherical_ellipsoids(frame);
      const auto edges = rtda::pairwise_scales(ellipsoids, ph_params.alpha_max, ph_params.search_tol,
                                               rtda::thread_count_from_env());
      if (!ph_complex.empty()) rtda::write_file(ph_complex, to_csv(rtda::write_complex_csv, rtda::build_complex(edges, frame.size())));
      emit(ph_output, to_csv(rtda::write_diagram_csv, rtda::compute_flag_diagram(edges, frame.size())));
      return 0;
    }

    if (*dn) {
      dn_params.mode = rtda::parse_filter_mode(dn_mode);
      dn_params.neighbourhood = rtda::parse_neighbourhood_rule(dn_rule);
      dn_params.threads = rtda::thread_count_from_env();
      std::optional<rtda::SignalFrame> clean;
      std::optional<rtda::SignalFrame> input;
      if (dn_input.empty()) {
        clean = rtda::generate_signal(rtda::SignalSpec{});
        input = rtda::add_noise(*clean, {parse_snr(dn_snr), dn_seed});
      } else {
        input = load_signal(dn_input);
      }
      const auto out = rtda::denoise(*input, dn_params);
      if (clean) {
        for (std::size_t c = 0; c < out.channels(); ++c)
          std::clog << "channel " << c << ": rmse noisy=" << rtda::format_number(rtda::rmse(*input, *clean, c))
                    << " denoised=" << rtda::format_number(rtda::rmse(out, *clean, c)) << '\n';
      }
      emit(dn_output, to_csv(rtda::write_signal_csv, out));
      return 0;
    }

    if (*ex) {
      auto cfg = rtda::parse_config(rtda::read_file(ex_config));
      if (!ex_outdir.empty()) cfg.output_dir = ex_outdir;
      const auto result = rtda::run_experiment(cfg, rtda::thread_count_from_env());
      std::clog << result.rows.size() << " rows written to " << (cfg.output_dir / "results.csv").string();
      if (result.declared_failures) std::clog << ", " << result.declared_failures << " warning(s)";
      if (result.internal_errors) std::clog << ", " << result.internal_errors << " internal error(s)";
      std::clog << '\n';
      return result.internal_errors == 0 ? 0 : 2;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
