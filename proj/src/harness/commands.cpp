// Copyright 2026 The UPB Toolkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "upb/harness/commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "upb/harness/corpus.hpp"
#include "upb/harness/handles.hpp"
#include "upb/harness/tensor_file.hpp"

namespace upb::harness {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSegFrameMs = 32.0;

Corpus scan(const CorpusOptions& opts, std::ostream& log) {
  Corpus c = scan_corpus(opts.corpus_dir, opts.allow_any_rate);
  for (const auto& w : c.warnings) log << "warning: " << w << '\n';
  return c;
}

double segsnr(const upb_waveform* ref, const upb_waveform* est, const std::string& clip) {
  double v = 0.0;
  check(upb_segsnr(ref, est, kSegFrameMs, &v), "clip " + clip);
  return v;
}

double sisnr(const upb_waveform* ref, const upb_waveform* est, const std::string& clip) {
  double v = 0.0;
  check(upb_sisnr(ref, est, &v), "clip " + clip);
  return v;
}

double mag_rel_err(const upb_spectrogram* a, const upb_spectrogram* b) {
  double v = 0.0;
  check(upb_mag_spec_rel_err(a, b, &v), "magnitude error");
  return v;
}

void write_wav(const fs::path& path, const upb_waveform* w, upb_sample_format fmt) {
  check(upb_wav_write(path.string().c_str(), w, fmt), path.string());
}

std::string trial_id(std::size_t i, std::size_t n) {
  const std::size_t width = std::max<std::size_t>(4, std::to_string(n).size());
  std::string num = std::to_string(i + 1);
  return "t" + std::string(width - num.size(), '0') + num;
}

}  // namespace

MetricsSummary cmd_roundtrip(const CorpusOptions& opts, const fs::path& report, std::ostream& log) {
  const Corpus corpus = scan(opts, log);
  MetricsSummary s{"roundtrip", {}};
  for (const ClipEntry& clip : corpus.clips) {
    const WaveformPtr x = load_clip(clip);
    const SpectrogramPtr X = stft(x.get(), opts.stft.for_rate(clip.sample_rate));
    const WaveformPtr y = istft(X.get());
    s.clips.push_back({clip.clip_id, segsnr(x.get(), y.get(), clip.clip_id), sisnr(x.get(), y.get(), clip.clip_id),
                       std::nullopt, std::nullopt, std::nullopt});
  }
  write_report(s, report);
  return s;
}

MetricsSummary cmd_bias(const BiasOptions& opts, std::ostream& log) {
  const Corpus corpus = scan(opts.corpus, log);
  fs::create_directories(opts.out_dir);
  MetricsSummary s{"bias", {}};
  for (std::size_t i = 0; i < corpus.clips.size(); ++i) {
    const ClipEntry& clip = corpus.clips[i];
    double theta = 0.0;
    if (opts.theta) {
      theta = *opts.theta;
    } else {
      std::uint64_t state = upb_rng_stream(opts.seed, i);
      theta = -kPi + 2.0 * kPi * upb_rng_uniform(&state);
    }
    const upb_stft_config cfg = opts.corpus.stft.for_rate(clip.sample_rate);
    const WaveformPtr x = load_clip(clip);
    const SpectrogramPtr X = stft(x.get(), cfg);
    const SpectrogramPtr Xb = biased_stft(x.get(), cfg, theta);
    const WaveformPtr y = istft(Xb.get());
    write_wav(opts.out_dir / (clip.clip_id + ".wav"), y.get(), UPB_SAMPLE_FLOAT32);
    const SpectrogramPtr Y = stft(y.get(), cfg);
    s.clips.push_back({clip.clip_id, segsnr(x.get(), y.get(), clip.clip_id), sisnr(x.get(), y.get(), clip.clip_id),
                       theta, mag_rel_err(X.get(), Xb.get()), mag_rel_err(X.get(), Y.get())});
  }
  write_report(s, opts.out_dir / "report.json");
  return s;
}

upb_loss_weights load_weights(const std::optional<fs::path>& file) {
  upb_loss_weights w;
  upb_loss_weights_default(&w);
  if (!file) return w;
  std::ifstream in(*file);
  if (!in) throw std::runtime_error("cannot open weights file " + file->string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("bad weights file " + file->string() + ": " + e.what());
  }
  if (!j.is_object()) throw std::runtime_error("bad weights file " + file->string() + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    if (key == "lambda") {
      if (!value.is_array() || value.size() != 7)
        throw std::runtime_error("bad weights file: 'lambda' must be an array of 7 numbers");
      for (std::size_t i = 0; i < 7; ++i) {
        if (!value[i].is_number()) throw std::runtime_error("bad weights file: 'lambda' entries must be numbers");
        w.lambda[i] = value[i].get<double>();
      }
    } else if (key == "c") {
      if (!value.is_number()) throw std::runtime_error("bad weights file: 'c' must be a number");
      w.c = value.get<double>();
    } else {
      throw std::runtime_error("bad weights file: unknown key '" + key + "'");
    }
  }
  for (double l : w.lambda)
    if (!std::isfinite(l) || l < 0.0) throw std::runtime_error("bad weights file: lambdas must be finite and >= 0");
  if (!(w.c > 0.0 && w.c <= 1.0)) throw std::runtime_error("bad weights file: 'c' must lie in (0, 1]");
  return w;
}

LossSummary cmd_loss(const LossOptions& opts) {
  LossSummary s;
  s.weights = load_weights(opts.weights_file);
  const WaveformPtr clean = read_wav(opts.clean_wav.string());
  const WaveformPtr est = read_wav(opts.est_wav.string());
  const int rate = upb_waveform_sample_rate(clean.get());
  if (upb_waveform_sample_rate(est.get()) != rate)
    throw std::runtime_error("sample rate mismatch between clean and estimate");
  if (upb_waveform_length(clean.get()) != upb_waveform_length(est.get()))
    throw std::runtime_error("duration mismatch: clean has " + std::to_string(upb_waveform_length(clean.get())) +
                             " samples, estimate has " + std::to_string(upb_waveform_length(est.get())));

  const upb_stft_config cfg = opts.stft.for_rate(rate);
  const SpectrogramPtr X = stft(clean.get(), cfg);
  const SpectrogramPtr Xh = stft(est.get(), cfg);
  const MatrixPtr mag = magnitude(X.get());
  const MatrixPtr mag_h = magnitude(Xh.get());
  const MatrixPtr phi = phase(X.get());
  const MatrixPtr phi_h = phase(Xh.get());
  const MatrixPtr m_cmp = compress_magnitude(X.get(), s.weights.c);

  double v = 0.0;
  check(upb_loss_mag(mag.get(), mag_h.get(), s.weights.c, &v), "mag");
  s.terms[UPB_TERM_MAG] = v;
  check(upb_loss_ri(X.get(), Xh.get(), s.weights.c, &v), "ri");
  s.terms[UPB_TERM_RI] = v;
  check(upb_loss_time(clean.get(), est.get(), &v), "time");
  s.terms[UPB_TERM_TIME] = v;
  check(upb_loss_upb(phi.get(), phi_h.get(), &v), "upb");
  s.terms[UPB_TERM_UPB] = v;
  check(upb_loss_wupb(phi.get(), phi_h.get(), m_cmp.get(), &v), "wupb");
  s.terms[UPB_TERM_WUPB] = v;
  if (!opts.adv_scores.empty()) {
    check(upb_loss_adv(opts.adv_scores.data(), opts.adv_scores.size(), &v), "adv");
    s.terms[UPB_TERM_ADV] = v;
  }
  if (!opts.upb_adv_scores.empty()) {
    check(upb_loss_adv(opts.upb_adv_scores.data(), opts.upb_adv_scores.size(), &v), "upb_adv");
    s.terms[UPB_TERM_UPB_ADV] = v;
  }

  upb_loss_terms terms{};
  for (std::size_t i = 0; i < UPB_TERM_COUNT; ++i) {
    terms.present[i] = s.terms[i].has_value();
    terms.value[i] = s.terms[i].value_or(0.0);
  }
  const std::pair<upb_composite_kind, const char*> kinds[] = {
      {UPB_COMPOSITE_ORIGINAL, "L_ori"}, {UPB_COMPOSITE_L1, "L1"}, {UPB_COMPOSITE_L2, "L2"}, {UPB_COMPOSITE_L3, "L3"}};
  for (const auto& [kind, name] : kinds) {
    CompositeValue c{name, std::nullopt, {}};
    const upb_status st = upb_composite(kind, &terms, &s.weights, &v);
    if (st == UPB_OK)
      c.value = v;
    else if (st == UPB_ERR_MISSING_TERM)
      c.missing = upb_last_error();
    else
      check(st, name);
    s.composites.push_back(std::move(c));
  }
  return s;
}

namespace {
constexpr const char* kTermNames[UPB_TERM_COUNT] = {"mag", "ri", "time", "adv", "upb", "wupb", "upb_adv"};
}

nlohmann::ordered_json to_json(const LossSummary& s) {
  nlohmann::ordered_json j;
  j["lambda"] = std::vector<double>(s.weights.lambda, s.weights.lambda + 7);
  j["c"] = s.weights.c;
  auto& t = j["terms"] = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < UPB_TERM_COUNT; ++i)
    t[kTermNames[i]] = s.terms[i] ? nlohmann::ordered_json(*s.terms[i]) : nlohmann::ordered_json(nullptr);
  auto& c = j["composites"] = nlohmann::ordered_json::object();
  for (const auto& comp : s.composites) {
    if (comp.value)
      c[comp.name] = *comp.value;
    else
      c[comp.name] = {{"missing", comp.missing}};
  }
  return j;
}

std::string to_table(const LossSummary& s) {
  std::string out;
  char line[160];
  for (std::size_t i = 0; i < UPB_TERM_COUNT; ++i) {
    if (s.terms[i])
      std::snprintf(line, sizeof line, "%-10s %14.6e\n", kTermNames[i], *s.terms[i]);
    else
      std::snprintf(line, sizeof line, "%-10s %14s\n", kTermNames[i], "n/a");
    out += line;
  }
  out += std::string(25, '-') + "\n";
  for (const auto& c : s.composites) {
    if (c.value)
      std::snprintf(line, sizeof line, "%-10s %14.6e\n", c.name.c_str(), *c.value);
    else
      std::snprintf(line, sizeof line, "%-10s %14s  (%s)\n", c.name.c_str(), "n/a", c.missing.c_str());
    out += line;
  }
  return out;
}

upb_augment_config load_augment_config(const std::optional<fs::path>& file) {
  upb_augment_config cfg;
  upb_augment_config_default(&cfg);
  if (!file) return cfg;
  std::ifstream in(*file);
  if (!in) throw std::runtime_error("cannot open augment config " + file->string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("bad augment config " + file->string() + ": " + e.what());
  }
  if (!j.is_object()) throw std::runtime_error("bad augment config: expected an object");
  for (const auto& [key, value] : j.items()) {
    if (key == "rng_seed") {
      if (!value.is_number_unsigned()) throw std::runtime_error("bad augment config: rng_seed must be unsigned");
      cfg.rng_seed = value.get<std::uint64_t>();
      continue;
    }
    double* field = key == "p_global"         ? &cfg.p_global
                    : key == "p_linear"       ? &cfg.p_linear
                    : key == "p_magnoise"     ? &cfg.p_magnoise
                    : key == "noise_variance" ? &cfg.noise_variance
                                              : nullptr;
    if (field == nullptr) throw std::runtime_error("bad augment config: unknown key '" + key + "'");
    if (!value.is_number()) throw std::runtime_error("bad augment config: '" + key + "' must be a number");
    *field = value.get<double>();
  }
  for (double p : {cfg.p_global, cfg.p_linear, cfg.p_magnoise})
    if (!(p >= 0.0 && p <= 1.0)) throw std::runtime_error("invalid augment config: probabilities must lie in [0, 1]");
  if (!(cfg.noise_variance >= 0.0) || !std::isfinite(cfg.noise_variance))
    throw std::runtime_error("invalid augment config: noise_variance must be >= 0");
  return cfg;
}

nlohmann::ordered_json to_json(const upb_augment_record& r) {
  nlohmann::ordered_json j;
  j["global"] = {{"applied", r.applied_global != 0}, {"theta", r.theta}};
  j["linear"] = {{"applied", r.applied_linear != 0}, {"tau_shift", r.tau_shift}};
  j["magnoise"] = {{"applied", r.applied_magnoise != 0}};
  return j;
}

AugmentSummary cmd_augment(const AugmentOptions& opts, std::ostream& log) {
  upb_augment_config cfg = load_augment_config(opts.config_file);
  if (opts.seed) cfg.rng_seed = *opts.seed;
  const Corpus corpus = scan(opts.corpus, log);
  fs::create_directories(opts.out_dir);

  AugmentSummary s;
  s.clip_count = corpus.clips.size();
  std::array<std::size_t, 3> hits{};
  for (std::size_t i = 0; i < corpus.clips.size(); ++i) {
    const ClipEntry& clip = corpus.clips[i];
    const fs::path out = opts.out_dir / (clip.clip_id + ".wav");
    const WaveformPtr x = load_clip(clip);
    const SpectrogramPtr X = stft(x.get(), opts.corpus.stft.for_rate(clip.sample_rate));

    std::uint64_t state = upb_rng_stream(cfg.rng_seed, i);
    upb_spectrogram* raw = nullptr;
    upb_augment_record rec{};
    check(upb_augment_spectrogram(X.get(), &cfg, &state, &raw, &rec), "clip " + clip.clip_id);
    const SpectrogramPtr Xa(raw);

    if (!rec.applied_global && !rec.applied_linear && !rec.applied_magnoise) {
      fs::copy_file(clip.path, out, fs::copy_options::overwrite_existing);
    } else {
      const WaveformPtr y = istft(Xa.get());
      write_wav(out, y.get(), clip.format);
    }
    nlohmann::ordered_json j;
    j["clip_id"] = clip.clip_id;
    j["record"] = to_json(rec);
    write_json(opts.out_dir / (clip.clip_id + ".json"), j);

    hits[0] += rec.applied_global != 0;
    hits[1] += rec.applied_linear != 0;
    hits[2] += rec.applied_magnoise != 0;
    s.records.emplace_back(clip.clip_id, rec);
  }
  const auto n = static_cast<double>(s.clip_count);
  s.frequencies = {hits[0] / n, hits[1] / n, hits[2] / n};

  nlohmann::ordered_json summary;
  summary["clip_count"] = s.clip_count;
  summary["rng_seed"] = cfg.rng_seed;
  summary["config"] = {{"p_global", cfg.p_global},
                       {"p_linear", cfg.p_linear},
                       {"p_magnoise", cfg.p_magnoise},
                       {"noise_variance", cfg.noise_variance}};
  summary["frequencies"] = {{"global", s.frequencies[0]}, {"linear", s.frequencies[1]}, {"magnoise", s.frequencies[2]}};
  write_json(opts.out_dir / "summary.json", summary);
  return s;
}

nlohmann::ordered_json cmd_abx_gen(const AbxGenOptions& opts, std::ostream& log) {
  if (opts.n_trials < 1) throw std::runtime_error("n_trials must be >= 1");
  const Corpus corpus = scan(opts.corpus, log);
  fs::create_directories(opts.out_dir / "audio");

  nlohmann::ordered_json manifest;
  manifest["format"] = "upb-abx-session/1";
  manifest["seed"] = opts.seed;
  manifest["trials"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < opts.n_trials; ++i) {
    const ClipEntry& clip = corpus.clips[i % corpus.clips.size()];
    std::uint64_t state = upb_rng_stream(opts.seed, i);
    const double theta = -kPi + 2.0 * kPi * upb_rng_uniform(&state);
    const bool unbiased_first = upb_rng_uniform(&state) < 0.5;

    const upb_stft_config cfg = opts.corpus.stft.for_rate(clip.sample_rate);
    const WaveformPtr x = load_clip(clip);
    const WaveformPtr unbiased = istft(stft(x.get(), cfg).get());
    const WaveformPtr biased = istft(biased_stft(x.get(), cfg, theta).get());

    const std::string id = trial_id(i, opts.n_trials);
    const fs::path dir = opts.out_dir / "audio" / id;
    fs::create_directories(dir);
    const upb_waveform* a = unbiased_first ? unbiased.get() : biased.get();
    const upb_waveform* b = unbiased_first ? biased.get() : unbiased.get();
    write_wav(dir / "x.wav", x.get(), UPB_SAMPLE_FLOAT32);
    write_wav(dir / "a.wav", a, UPB_SAMPLE_FLOAT32);
    write_wav(dir / "b.wav", b, UPB_SAMPLE_FLOAT32);

    nlohmann::ordered_json t;
    t["trial_id"] = id;
    t["clip_id"] = clip.clip_id;
    t["order"] = unbiased_first ? "unbiased-first" : "biased-first";
    t["unbiased"] = unbiased_first ? "a" : "b";
    t["theta"] = theta;
    t["sisnr_unbiased_db"] = sisnr(x.get(), unbiased.get(), clip.clip_id);
    t["sisnr_biased_db"] = sisnr(x.get(), biased.get(), clip.clip_id);
    manifest["trials"].push_back(std::move(t));
  }
  write_json(opts.out_dir / "manifest.json", manifest);
  return manifest;
}

DiscInputSummary cmd_disc_input(const fs::path& wav, const fs::path& out, const StftParams& params,
                                bool allow_any_rate) {
  const WaveformPtr x = read_wav(wav.string());
  const int rate = upb_waveform_sample_rate(x.get());
  if (!allow_any_rate && rate != kCorpusSampleRate)
    throw std::runtime_error(wav.string() + ": sample rate " + std::to_string(rate) +
                             " Hz (expected 16000; use --allow-any-rate)");
  const SpectrogramPtr X = stft(x.get(), params.for_rate(rate));
  const MatrixPtr phi = phase(X.get());
  const MatrixPtr mag = magnitude(X.get());
  const std::size_t T = upb_matrix_rows(mag.get()), F = upb_matrix_cols(mag.get());
  std::vector<double> values(3 * T * F);
  check(upb_disc_input(phi.get(), mag.get(), values.data(), values.size()), "disc-input");
  write_disc_tensor(out, T, F, values);
  return {T, F};
}

}  // namespace upb::harness
