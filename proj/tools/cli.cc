// Copyright 2026 The ESBQ Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.h"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "esbq/aligner.h"
#include "esbq/conv.h"
#include "esbq/cost_model.h"
#include "esbq/error.h"
#include "esbq/esb_float.h"
#include "esbq/projection.h"
#include "esbq/quant_grid.h"
#include "esbq/tensor.h"
#include "esbq/tensor_io.h"
#include "esbq/train_demo.h"

namespace esbq::cli {

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) return std::to_string(v);
  std::string s(buf, end);
  return s == "-0" ? "0" : s;
}

namespace {

std::string format_fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::string code_hex(std::uint8_t byte) {
  char buf[8];
  std::snprintf(buf, sizeof(buf), "0x%02X", byte);
  return buf;
}

// "s|eee|f" bit groups of a code.
std::string code_bits(const EsbCode& code) {
  const int b = code.config.bits();
  const int k = code.config.sig();
  const std::uint8_t byte = code.to_byte();
  std::string s;
  for (int bit = b - 1; bit >= 0; --bit) {
    s.push_back(((byte >> bit) & 1u) ? '1' : '0');
    if (bit == b - 1 || (bit == k && k > 0)) s.push_back('|');
  }
  return s;
}

// Options shared by every subcommand that takes a quantizer configuration.
struct ConfigFlags {
  int bits = 4;
  int sig = 1;

  void attach(CLI::App* app) {
    app->add_option("--bits", bits, "Total bits b (2..8)")->required();
    app->add_option("--sig", sig, "Significant-bit parameter k (0..b-2)")
        ->required();
  }

  QuantConfig make(std::ostream& err) const {
    QuantConfig config = QuantConfig::make(bits, sig);
    if (!config.recommended()) {
      err << "warning: " << config.name()
          << " has b-k > 4; it is not recommended (ESB(b-1,k) is as accurate "
             "with fewer bits)\n";
    }
    return config;
  }
};

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw Error("cannot open " + path + " for writing");
  f << text;
  if (!f) throw Error("failed writing " + path);
}

QuantizedTensor as_quantized(const AnyTensor& t, const QuantConfig& config,
                             const std::string& what) {
  if (const auto* q = std::get_if<QuantizedTensor>(&t)) {
    if (q->config() != config) {
      throw UsageError(what + " is quantized as " + q->config().name() +
                       " but " + config.name() + " was requested");
    }
    return *q;
  }
  return quantize_tensor(std::get<TensorF>(t), config);
}

std::vector<std::uint32_t> parse_tile(const std::string& spec) {
  std::vector<std::uint32_t> out;
  std::stringstream ss(spec);
  std::string part;
  while (std::getline(ss, part, ',')) {
    std::uint32_t v = 0;
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (ec != std::errc() || ptr != part.data() + part.size() || v == 0) {
      throw ArgumentError("--tile expects four positive integers Th,Tw,Tn,Tm");
    }
    out.push_back(v);
  }
  if (out.size() != 4) {
    throw ArgumentError("--tile expects four positive integers Th,Tw,Tn,Tm");
  }
  return out;
}

std::uint8_t parse_code_byte(const std::string& text) {
  try {
    std::size_t used = 0;
    const unsigned long v = std::stoul(text, &used, 0);
    if (used != text.size() || v > 0xFF) throw std::out_of_range(text);
    return static_cast<std::uint8_t>(v);
  } catch (const std::logic_error&) {
    throw ArgumentError("code must be a byte value such as 0x0F, got '" + text + "'");
  }
}

// --- subcommands -------------------------------------------------------

std::string cmd_grid(const QuantConfig& config, double alpha,
                     const std::string& format) {
  if (!(alpha > 0.0)) throw ArgumentError("--alpha must be positive");
  std::ostringstream os;
  const auto values = grid_for(config).symmetric();
  if (format == "csv") {
    for (double v : values) os << format_double(alpha * v) << '\n';
  } else {
    os << config.name() << " alias=" << alias_name(config.alias())
       << " N=" << config.max_exponent()
       << " C=" << format_double(config.max_value())
       << " alpha=" << format_double(alpha) << " levels=" << values.size() << '\n';
    for (double v : values) {
      const EsbCode code = encode(v, config);
      os << std::setw(12) << format_double(alpha * v) << "  " << code_hex(code.to_byte())
         << "  " << code_bits(code) << '\n';
    }
  }
  return os.str();
}

std::string cmd_alpha_table(int bits_min, int bits_max, const std::string& format,
                            MinimumPolicy policy) {
  SolverOptions options;
  options.policy = policy;
  const auto rows = generate_table(bits_min, bits_max, options);
  std::ostringstream os;
  if (format == "csv") {
    os << "b,k,alias,alpha_star,dda\n";
    for (const auto& r : rows) {
      os << r.config.bits() << ',' << r.config.sig() << ','
         << alias_name(r.alias) << ',' << format_double(r.alpha_star) << ','
         << format_double(r.dda) << '\n';
    }
  } else {
    os << "| W/A | k | Name | Alias | DDA | alpha* | note |\n"
       << "|---|---|---|---|---|---|---|\n";
    for (const auto& r : rows) {
      os << "| " << r.config.bits() << '/' << r.config.bits() << " | "
         << r.config.sig() << " | " << r.config.name() << " | "
         << alias_name(r.alias) << " | " << format_fixed(r.dda, 4) << " | "
         << format_fixed(r.alpha_star, 4) << " | "
         << (r.recommended ? "" : "b-k>4, not recommended") << " |\n";
    }
  }
  return os.str();
}

std::string cmd_dda(const QuantConfig& config, double alpha,
                    unsigned long long samples, unsigned long long seed) {
  std::ostringstream os;
  const double closed = dda_eval(alpha, config);
  if (samples == 0) {
    os << "b,k,alpha,dda\n"
       << config.bits() << ',' << config.sig() << ',' << format_double(alpha)
       << ',' << format_double(closed) << '\n';
    return os.str();
  }
  const auto mc = dda_monte_carlo(alpha, config, samples, seed);
  os << "b,k,alpha,dda,mc_mse,mc_std_error,mc_samples,seed\n"
     << config.bits() << ',' << config.sig() << ',' << format_double(alpha) << ','
     << format_double(closed) << ',' << format_double(mc.mse) << ','
     << format_double(mc.std_error) << ',' << mc.samples << ',' << seed << '\n';
  return os.str();
}

std::string cmd_project_value(const QuantConfig& config, double alpha,
                              double value) {
  const double data[] = {value};
  const auto r = quantize_array(std::span<const double>(data), alpha, config);
  std::ostringstream os;
  os << "value=" << format_double(r[0].value) << '\n'
     << "code=" << code_hex(r[0].code.to_byte()) << '\n'
     << "bits=" << code_bits(r[0].code) << '\n'
     << "clamped=" << (r[0].clamped ? "true" : "false") << '\n';
  return os.str();
}

std::string cmd_project_tensor(const QuantConfig& config, double alpha,
                               const std::string& input,
                               const std::string& output) {
  const TensorF t = read_float_tensor(input);
  const auto r = quantize_array(t.data(), alpha, config);
  std::ostringstream os;
  os << "index,input,value,code,clamped\n";
  for (std::size_t i = 0; i < r.size(); ++i) {
    os << i << ',' << format_double(t[i]) << ',' << format_double(r[i].value)
       << ',' << code_hex(r[i].code.to_byte()) << ',' << (r[i].clamped ? 1 : 0)
       << '\n';
  }
  if (!output.empty()) write_tensor(output, quantize_tensor(t, config, alpha));
  return os.str();
}

// The (k+1)-bit multiplier operand: the implicit leading bit and the fraction.
std::string significand_bits(const EsbCode& c) {
  const int k = c.config.sig();
  const auto f = static_cast<unsigned>(c.significand());
  std::string s;
  for (int bit = k; bit >= 0; --bit) s.push_back(((f >> bit) & 1u) ? '1' : '0');
  return s;
}

std::string describe_code(const char* label, const EsbCode& c) {
  std::ostringstream os;
  os << label << ": code=" << code_hex(c.to_byte()) << " bits=" << code_bits(c)
     << " sign=" << int(c.sign) << " exponent=" << int(c.exponent)
     << " fraction=" << int(c.fraction) << " significand=" << c.significand()
     << " operand=" << significand_bits(c)
     << " value=" << format_double(decode(c)) << '\n';
  return os.str();
}

std::string cmd_mul(const QuantConfig& config, const std::string& a_text,
                    const std::string& b_text) {
  const EsbCode a = EsbCode::from_byte(parse_code_byte(a_text), config);
  const EsbCode b = EsbCode::from_byte(parse_code_byte(b_text), config);
  const ExactProduct p = multiply(a, b);
  std::ostringstream os;
  os << describe_code("a", a) << describe_code("b", b)
     << "multiplier_bits=" << config.sig() + 1 << '\n'
     << "product: sign=" << (p.sign < 0 ? '-' : '+')
     << " significand=" << p.significand << " exponent=" << p.exponent
     << " value=" << format_double(p.value()) << '\n';
  return os.str();
}

std::string cmd_quantize(const QuantConfig& config, const std::string& alpha_text,
                         const std::string& input, const std::string& output,
                         const std::string& stats_path, bool normalize_first) {
  TensorF t = read_float_tensor(input);
  nlohmann::json stats;
  if (normalize_first) {
    auto [normalized, s] = normalize(t);
    t = std::move(normalized);
    stats["mu"] = s.mu;
    stats["sigma"] = s.sigma;
    stats["epsilon"] = s.epsilon;
  }
  std::optional<double> alpha;
  if (alpha_text != "auto") {
    try {
      std::size_t used = 0;
      alpha = std::stod(alpha_text, &used);
      if (used != alpha_text.size()) throw std::invalid_argument(alpha_text);
    } catch (const std::logic_error&) {
      throw ArgumentError("--alpha must be a number or 'auto', got '" + alpha_text + "'");
    }
  }
  const QuantizedTensor q = quantize_tensor(t, config, alpha);
  std::size_t clamped = 0;
  double sq = 0.0;
  const double c = config.max_value();
  for (std::size_t i = 0; i < t.size(); ++i) {
    clamped += std::fabs(t[i] / q.alpha()) > c;
    const double e = t[i] - q.value(i);
    sq += e * e;
  }
  write_tensor(output, q);

  stats["bits"] = config.bits();
  stats["sig"] = config.sig();
  stats["alpha"] = q.alpha();
  stats["normalized"] = normalize_first;
  stats["elements"] = t.size();
  stats["clamped"] = clamped;
  stats["mse"] = sq / static_cast<double>(t.size());
  if (!stats_path.empty()) write_text_file(stats_path, stats.dump(2) + "\n");

  std::ostringstream os;
  os << "wrote " << output << " (" << t.size() << " elements, " << config.name()
     << ", alpha=" << format_double(q.alpha()) << ", clamped=" << clamped << ")\n";
  return os.str();
}

std::string cmd_hist(const std::string& input, int bins) {
  const AnyTensor any = read_tensor(input);
  std::vector<double> values;
  const QuantizedTensor* q = std::get_if<QuantizedTensor>(&any);
  if (q) {
    for (std::size_t i = 0; i < q->size(); ++i) values.push_back(q->value(i));
  } else {
    for (float v : std::get<TensorF>(any).data()) values.push_back(v);
  }
  std::ostringstream os;
  if (bins == 0) {
    if (!q) throw ArgumentError("--bins 0 (one bin per grid level) needs a quantized tensor");
    std::map<double, std::size_t> counts;
    for (double g : grid_for(q->config()).symmetric()) counts[g] = 0;
    for (std::size_t i = 0; i < q->size(); ++i) ++counts[q->grid_value(i)];
    os << "value,count\n";
    for (const auto& [g, n] : counts) {
      os << format_double(q->alpha() * g) << ',' << n << '\n';
    }
    return os.str();
  }
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  const double width = hi > lo ? (hi - lo) / bins : 1.0;
  std::vector<std::size_t> counts(static_cast<std::size_t>(bins), 0);
  for (double v : values) {
    auto idx = static_cast<long>((v - lo) / width);
    idx = std::clamp(idx, 0L, static_cast<long>(bins) - 1);
    ++counts[static_cast<std::size_t>(idx)];
  }
  os << "bin_lower,bin_upper,count\n";
  for (int i = 0; i < bins; ++i) {
    os << format_double(lo + i * width) << ',' << format_double(lo + (i + 1) * width)
       << ',' << counts[static_cast<std::size_t>(i)] << '\n';
  }
  return os.str();
}

std::string cmd_conv_sim(const QuantConfig& config, const std::string& input,
                         const std::string& weights, const std::string& tile,
                         int stride, int padding, bool check_direct,
                         const std::string& output) {
  const QuantizedTensor in = as_quantized(read_tensor(input), config, "input");
  const QuantizedTensor w = as_quantized(read_tensor(weights), config, "weights");
  const auto t = parse_tile(tile);
  const TilingConfig tiling{t[0], t[1], t[2], t[3]};
  ConvSpec spec;
  spec.kernel = w.shape().size() == 4 ? static_cast<int>(w.shape()[0]) : 0;
  spec.stride = stride;
  spec.padding = padding;

  const Shape out_shape = conv_output_shape(in.shape(), w.shape(), spec);
  const TensorF tiled = conv2d_tiled(in, w, spec, tiling);
  const std::uint64_t trips =
      tile_trip_count(out_shape[0], out_shape[1], in.shape()[2], out_shape[2], tiling);
  const std::uint64_t macs = static_cast<std::uint64_t>(out_shape[0]) * out_shape[1] *
                             out_shape[2] * spec.kernel * spec.kernel * in.shape()[2];

  std::ostringstream os;
  os << "output_shape=" << out_shape[0] << 'x' << out_shape[1] << 'x' << out_shape[2]
     << '\n'
     << "tile=" << tiling.tile_h << ',' << tiling.tile_w << ',' << tiling.tile_n
     << ',' << tiling.tile_m << '\n'
     << "trip_count=" << trips << '\n'
     << "macs=" << macs << '\n'
     << "shift_adds=" << shiftadd_cost(config, macs).total_shift_adds << '\n';
  if (check_direct) {
    const TensorF direct = conv2d_direct(in, w, spec);
    std::size_t mismatches = 0;
    for (std::size_t i = 0; i < direct.size(); ++i) {
      mismatches += std::bit_cast<std::uint32_t>(direct[i]) !=
                    std::bit_cast<std::uint32_t>(tiled[i]);
    }
    os << "direct_mismatches=" << mismatches << '\n';
    if (mismatches != 0) {
      throw DataError("tiled convolution differs from the direct reference in " +
                      std::to_string(mismatches) + " elements");
    }
  }
  if (!output.empty()) write_tensor(output, tiled);
  return os.str();
}

std::string cmd_cost(const QuantConfig& config, unsigned long long macs) {
  const ShiftAddCost c = shiftadd_cost(config, macs);
  std::ostringstream os;
  os << "b,k,macs,multiplier_bits,shift_adds_per_product,total_shift_adds\n"
     << config.bits() << ',' << config.sig() << ',' << macs << ','
     << c.multiplier_bits << ',' << c.shift_adds_per_product << ','
     << c.total_shift_adds << '\n';
  return os.str();
}

std::string trace_csv(const std::vector<EpochStats>& trace) {
  std::ostringstream os;
  os << "epoch,loss,accuracy\n";
  for (const auto& e : trace) {
    os << e.epoch << ',' << format_double(e.loss) << ',' << format_double(e.accuracy)
       << '\n';
  }
  return os.str();
}

std::string cmd_train_demo(const QuantConfig& config, const TrainOptions& options,
                           std::size_t samples, const std::string& trace_path,
                           std::ostream& err) {
  const Dataset data = make_blobs(samples, options.seed);
  TrainResult result;
  try {
    result = train_demo(data, config, options);
  } catch (const TrainingDivergence& e) {
    err << trace_csv(e.trace());
    throw;
  }
  const std::string csv = trace_csv(result.trace);
  if (trace_path.empty()) return csv;
  write_text_file(trace_path, csv);
  const EpochStats& last = result.trace.empty() ? EpochStats{} : result.trace.back();
  std::ostringstream os;
  os << "epochs=" << result.trace.size() << " final_loss=" << format_double(last.loss)
     << " final_accuracy=" << format_double(last.accuracy) << '\n';
  return os.str();
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err) {
  CLI::App app{"ESB quantization toolkit: grids, alpha tables, codec, "
               "convolution simulation and a training demo",
               "esbq"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  std::string result;
  std::function<std::string()> action;

  // grid
  auto* grid = app.add_subcommand("grid", "Print the symmetric grid scaled by alpha");
  ConfigFlags grid_cfg;
  double grid_alpha = 1.0;
  std::string grid_format = "csv";
  grid_cfg.attach(grid);
  grid->add_option("--alpha", grid_alpha, "Scaling factor")->capture_default_str();
  grid->add_option("--format", grid_format, "csv or text")
      ->check(CLI::IsMember({"csv", "text"}))
      ->capture_default_str();
  grid->callback([&] {
    action = [&] { return cmd_grid(grid_cfg.make(err), grid_alpha, grid_format); };
  });

  // alpha-table
  auto* table = app.add_subcommand("alpha-table", "Optimal alpha and DDA per (b, k)");
  int bits_min = 2;
  int bits_max = 8;
  std::string table_format = "csv";
  std::string policy = "first-local";
  table->add_option("--bits-min", bits_min, "Smallest b")->capture_default_str();
  table->add_option("--bits-max", bits_max, "Largest b")->capture_default_str();
  table->add_option("--format", table_format, "csv or md")
      ->check(CLI::IsMember({"csv", "md"}))
      ->capture_default_str();
  table->add_option("--policy", policy, "first-local or global minimum of the scan")
      ->check(CLI::IsMember({"first-local", "global"}))
      ->capture_default_str();
  table->callback([&] {
    action = [&] {
      return cmd_alpha_table(bits_min, bits_max, table_format,
                             policy == "global" ? MinimumPolicy::kGlobal
                                                : MinimumPolicy::kFirstLocal);
    };
  });

  // dda
  auto* dda = app.add_subcommand("dda", "Evaluate the distribution difference at alpha");
  ConfigFlags dda_cfg;
  double dda_alpha = 1.0;
  unsigned long long mc_samples = 0;
  unsigned long long dda_seed = kDefaultSeed;
  dda_cfg.attach(dda);
  dda->add_option("--alpha", dda_alpha, "Scaling factor")->required();
  dda->add_option("--mc-samples", mc_samples, "Monte Carlo samples (0 = off)")
      ->capture_default_str();
  dda->add_option("--seed", dda_seed, "Monte Carlo seed")->capture_default_str();
  dda->callback([&] {
    action = [&] { return cmd_dda(dda_cfg.make(err), dda_alpha, mc_samples, dda_seed); };
  });

  // project
  auto* project = app.add_subcommand("project", "Quantize a value or a float tensor");
  ConfigFlags project_cfg;
  double project_alpha = 1.0;
  std::optional<double> project_value_opt;
  std::string project_input;
  std::string project_output;
  project_cfg.attach(project);
  project->add_option("--alpha", project_alpha, "Scaling factor")->capture_default_str();
  auto* value_opt = project->add_option("--value", project_value_opt, "Single value");
  auto* input_opt = project->add_option("--input", project_input, "Float ESBT tensor");
  value_opt->excludes(input_opt);
  project->add_option("--output", project_output,
                      "Write the quantized tensor (with --input)");
  project->callback([&] {
    action = [&] {
      const QuantConfig config = project_cfg.make(err);
      if (project_value_opt) {
        return cmd_project_value(config, project_alpha, *project_value_opt);
      }
      if (project_input.empty()) throw ArgumentError("give --value or --input");
      return cmd_project_tensor(config, project_alpha, project_input, project_output);
    };
  });

  // mul
  auto* mul = app.add_subcommand("mul", "Exact product of two ESB codes");
  ConfigFlags mul_cfg;
  std::string mul_a;
  std::string mul_b;
  mul_cfg.attach(mul);
  mul->add_option("--a", mul_a, "First code byte, e.g. 0x0F")->required();
  mul->add_option("--b", mul_b, "Second code byte")->required();
  mul->callback([&] { action = [&] { return cmd_mul(mul_cfg.make(err), mul_a, mul_b); }; });

  // quantize
  auto* quant = app.add_subcommand("quantize", "Quantize a float ESBT tensor");
  ConfigFlags quant_cfg;
  std::string quant_alpha = "auto";
  std::string quant_input;
  std::string quant_output;
  std::string quant_stats;
  bool quant_normalize = false;
  quant_cfg.attach(quant);
  quant->add_option("--alpha", quant_alpha, "Scaling factor or 'auto' (alpha*)")
      ->capture_default_str();
  quant->add_option("--input", quant_input, "Float ESBT tensor")->required();
  quant->add_option("--output", quant_output, "Quantized ESBT output")->required();
  quant->add_option("--stats", quant_stats, "Write quantization statistics as JSON");
  quant->add_flag("--normalize", quant_normalize,
                  "Normalize to zero mean, unit variance first");
  quant->callback([&] {
    action = [&] {
      return cmd_quantize(quant_cfg.make(err), quant_alpha, quant_input, quant_output,
                          quant_stats, quant_normalize);
    };
  });

  // hist
  auto* hist = app.add_subcommand("hist", "Histogram of tensor values as CSV");
  std::string hist_input;
  int hist_bins = 0;
  std::string hist_output = "csv";
  hist->add_option("--input", hist_input, "ESBT tensor")->required();
  hist->add_option("--bins", hist_bins,
                   "Equal-width bins; 0 = one row per grid level (quantized input)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  hist->add_option("--output", hist_output, "Output format")
      ->check(CLI::IsMember({"csv"}))
      ->capture_default_str();
  hist->callback([&] { action = [&] { return cmd_hist(hist_input, hist_bins); }; });

  // conv-sim
  auto* conv = app.add_subcommand("conv-sim", "Tiled convolution with exact MACs");
  ConfigFlags conv_cfg;
  std::string conv_input;
  std::string conv_weights;
  std::string conv_tile;
  int conv_stride = 1;
  int conv_pad = 0;
  bool conv_check = false;
  std::string conv_output;
  conv_cfg.attach(conv);
  conv->add_option("--input", conv_input, "H x W x Cin ESBT tensor")->required();
  conv->add_option("--weights", conv_weights, "K x K x Cin x Cout ESBT tensor")
      ->required();
  conv->add_option("--tile", conv_tile, "Th,Tw,Tn,Tm")->required();
  conv->add_option("--stride", conv_stride, "Convolution stride")->capture_default_str();
  conv->add_option("--pad", conv_pad, "Zero padding")->capture_default_str();
  conv->add_flag("--check-direct", conv_check, "Compare against the direct loop nest");
  conv->add_option("--output", conv_output, "Write the float output tensor");
  conv->callback([&] {
    action = [&] {
      return cmd_conv_sim(conv_cfg.make(err), conv_input, conv_weights, conv_tile,
                          conv_stride, conv_pad, conv_check, conv_output);
    };
  });

  // cost
  auto* cost = app.add_subcommand("cost", "Shift-add operation count model");
  ConfigFlags cost_cfg;
  unsigned long long cost_macs = 1;
  cost_cfg.attach(cost);
  cost->add_option("--macs", cost_macs, "Number of multiply-accumulates")
      ->capture_default_str();
  cost->callback([&] { action = [&] { return cmd_cost(cost_cfg.make(err), cost_macs); }; });

  // train-demo
  auto* train = app.add_subcommand("train-demo", "Toy STE training run on 2-D blobs");
  ConfigFlags train_cfg;
  TrainOptions train_opts;
  train_opts.seed = kDefaultSeed;
  std::size_t train_samples = 200;
  std::string train_trace;
  std::string train_mode = "esb";
  train_cfg.attach(train);
  train->add_option("--epochs", train_opts.epochs, "Epochs")->capture_default_str();
  train->add_option("--seed", train_opts.seed, "Seed for data, init and shuffling")
      ->capture_default_str();
  train->add_option("--lr", train_opts.learning_rate, "Learning rate")
      ->capture_default_str();
  train->add_option("--samples", train_samples, "Dataset size")->capture_default_str();
  train->add_option("--mode", train_mode, "esb, clip or fp (full precision)")
      ->check(CLI::IsMember({"esb", "clip", "fp"}))
      ->capture_default_str();
  train->add_option("--trace", train_trace, "Write the epoch,loss,accuracy trace CSV");
  train->callback([&] {
    action = [&] {
      train_opts.mode = train_mode == "esb"    ? QuantizerMode::kEsb
                        : train_mode == "clip" ? QuantizerMode::kClipIdentity
                                               : QuantizerMode::kFullPrecision;
      return cmd_train_demo(train_cfg.make(err), train_opts, train_samples,
                            train_trace, err);
    };
  });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    result = action();
  } catch (const Error& e) {
    err << "esbq: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "esbq: " << e.what() << '\n';
    return kExitData;
  }
  out << result;
  return kExitOk;
}

}  // namespace esbq::cli
