// Copyright 2026 The UPB Toolkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

// upb: command-line front end of the phase-bias toolkit.

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "upb/harness/abx.hpp"
#include "upb/harness/commands.hpp"
#include "upb/harness/corpus.hpp"
#include "upb/harness/reports.hpp"
#include "upb/harness/server.hpp"

namespace h = upb::harness;

int main(int argc, char** argv) {
  CLI::App app{"Phase-bias STFT toolkit: reconstruction metrics, losses, augmentation and ABX tests"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(upb_version()));

  h::StftParams stft;
  std::string window = "hamming";
  bool allow_any_rate = false;
  app.add_option("--frame-length", stft.frame_length, "STFT frame length in samples")->capture_default_str();
  app.add_option("--hop", stft.hop, "STFT hop in samples")->capture_default_str();
  app.add_option("--fft-size", stft.fft_size, "FFT size (power of two)")->capture_default_str();
  app.add_option("--window", window, "Analysis window")
      ->check(CLI::IsMember({"hamming", "hann"}))
      ->capture_default_str();
  app.add_flag("--allow-any-rate", allow_any_rate, "Accept clips whose sample rate is not 16 kHz");

  auto corpus_opts = [&](const std::string& dir) {
    h::CorpusOptions c;
    c.corpus_dir = dir;
    c.allow_any_rate = allow_any_rate;
    c.stft = stft;
    c.stft.window = window == "hann" ? UPB_WINDOW_HANN : UPB_WINDOW_HAMMING;
    return c;
  };

  // roundtrip
  std::string rt_corpus, rt_report = "roundtrip.json";
  auto* roundtrip = app.add_subcommand("roundtrip", "SegSNR/SiSNR of istft(stft(x)) for every clip");
  roundtrip->add_option("corpus", rt_corpus, "Directory of mono WAV files")->required();
  roundtrip->add_option("--report", rt_report, "JSON report path (table goes next to it as .txt)")
      ->capture_default_str();

  // bias
  std::string bias_corpus, bias_out;
  std::uint64_t bias_seed = 0;
  std::optional<double> bias_theta;
  auto* bias = app.add_subcommand("bias", "Reconstruct every clip from a globally phase-biased STFT");
  bias->add_option("corpus", bias_corpus, "Directory of mono WAV files")->required();
  bias->add_option("--out", bias_out, "Output directory")->required();
  bias->add_option("--seed", bias_seed, "Seed for the per-clip bias draws (UPB_SEED overrides)");
  bias->add_option("--theta", bias_theta, "Use this bias (radians) for every clip");

  // loss
  std::string loss_clean, loss_est, loss_weights, loss_json;
  std::vector<double> adv_scores, upb_adv_scores;
  auto* loss = app.add_subcommand("loss", "All loss terms and composites for a clean/estimate pair");
  loss->add_option("clean", loss_clean, "Clean WAV")->required();
  loss->add_option("estimate", loss_est, "Estimated WAV")->required();
  loss->add_option("--weights", loss_weights, "JSON weights file {\"lambda\": [...7], \"c\": ...}");
  loss->add_option("--adv-scores", adv_scores, "Discriminator scores for the adversarial term")->delimiter(',');
  loss->add_option("--upb-adv-scores", upb_adv_scores, "Phase-aware discriminator scores")->delimiter(',');
  loss->add_option("--json", loss_json, "Also write the report as JSON");

  // augment
  std::string aug_corpus, aug_out, aug_config;
  std::optional<std::uint64_t> aug_seed;
  auto* augment = app.add_subcommand("augment", "Apply gated phase-bias / magnitude-noise augmentation");
  augment->add_option("corpus", aug_corpus, "Directory of mono WAV files")->required();
  augment->add_option("--out", aug_out, "Output directory")->required();
  augment->add_option("--config", aug_config, "JSON augmentation config");
  augment->add_option("--seed", aug_seed, "Seed (overrides rng_seed in the config; UPB_SEED overrides both)");

  // abx
  auto* abx = app.add_subcommand("abx", "ABX listening test");
  abx->require_subcommand(1);
  std::string gen_corpus, gen_out;
  std::size_t gen_trials = 100;
  std::uint64_t gen_seed = 0;
  auto* gen = abx->add_subcommand("gen", "Generate an ABX session (stimuli + manifest)");
  gen->add_option("corpus", gen_corpus, "Directory of mono WAV files")->required();
  gen->add_option("--out", gen_out, "Session directory")->required();
  gen->add_option("--trials", gen_trials, "Number of trials")->capture_default_str()->check(CLI::PositiveNumber);
  gen->add_option("--seed", gen_seed, "Seed (UPB_SEED overrides)");

  std::string serve_dir, serve_host = "127.0.0.1", serve_ui;
  int serve_port = 8080;
  auto* serve = abx->add_subcommand("serve", "Serve a generated session over HTTP");
  serve->add_option("session", serve_dir, "Session directory from 'abx gen'")->required();
  serve->add_option("--port", serve_port, "Port")->capture_default_str();
  serve->add_option("--host", serve_host, "Bind address")->capture_default_str();
  serve->add_option("--ui", serve_ui, "Directory with the static listening-test UI");

  // disc-input
  std::string di_wav, di_out;
  auto* disc = app.add_subcommand("disc-input", "Dump the 3xTxF discriminator input tensor of a clip");
  disc->add_option("wav", di_wav, "Mono WAV")->required();
  disc->add_option("--out", di_out, "Output tensor file")->required();

  CLI11_PARSE(app, argc, argv);
  stft.window = window == "hann" ? UPB_WINDOW_HANN : UPB_WINDOW_HAMMING;

  try {
    if (*roundtrip) {
      const auto s = h::cmd_roundtrip(corpus_opts(rt_corpus), rt_report, std::cerr);
      std::cout << h::to_table(s);
    } else if (*bias) {
      h::BiasOptions o{corpus_opts(bias_corpus), bias_out, h::resolve_seed(bias_seed), bias_theta};
      const auto s = h::cmd_bias(o, std::cerr);
      std::cout << h::to_table(s);
    } else if (*loss) {
      h::LossOptions o;
      o.clean_wav = loss_clean;
      o.est_wav = loss_est;
      if (!loss_weights.empty()) o.weights_file = loss_weights;
      o.adv_scores = adv_scores;
      o.upb_adv_scores = upb_adv_scores;
      o.stft = stft;
      const auto s = h::cmd_loss(o);
      std::cout << h::to_table(s);
      if (!loss_json.empty()) h::write_json(loss_json, h::to_json(s));
    } else if (*augment) {
      h::AugmentOptions o{corpus_opts(aug_corpus), aug_out, std::nullopt, std::nullopt};
      if (!aug_config.empty()) o.config_file = aug_config;
      if (aug_seed || std::getenv("UPB_SEED") != nullptr) o.seed = h::resolve_seed(aug_seed.value_or(0));
      const auto s = h::cmd_augment(o, std::cerr);
      std::cout << "clips: " << s.clip_count << "\napplied: global " << s.frequencies[0] << ", linear "
                << s.frequencies[1] << ", magnoise " << s.frequencies[2] << '\n';
    } else if (*gen) {
      h::AbxGenOptions o{corpus_opts(gen_corpus), gen_out, gen_trials, h::resolve_seed(gen_seed)};
      const auto m = h::cmd_abx_gen(o, std::cerr);
      std::cout << "wrote " << m["trials"].size() << " trials to " << gen_out << '\n';
    } else if (*serve) {
      h::AbxService service(serve_dir);
      std::optional<std::filesystem::path> ui;
      if (!serve_ui.empty()) ui = serve_ui;
      h::AbxServer server(service, ui);
      const int port = server.bind(serve_host, serve_port);
      std::cout << "serving " << service.trials().size() << " trials on http://" << serve_host << ':' << port
                << std::endl;
      server.run();
    } else if (*disc) {
      const auto s = h::cmd_disc_input(di_wav, di_out, stft, allow_any_rate);
      std::cout << "wrote 3x" << s.frames << "x" << s.bins << " tensor to " << di_out << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
