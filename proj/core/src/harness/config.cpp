#include "entropix/harness/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <sstream>
#include <utility>

namespace entropix::harness {
namespace {

constexpr std::array<std::pair<std::string_view, Mode>, 5> kModes{{
    {"next-token", Mode::kNextToken},
    {"mask", Mode::kMask},
    {"scale", Mode::kScale},
    {"spec-baseline", Mode::kSpecBaseline},
    {"spec-entropy", Mode::kSpecEntropy},
}};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(int line, std::string_view key, std::string_view value) {
  throw ConfigError(line, "invalid value '" + std::string(value) + "' for key '" +
                              std::string(key) + "'");
}

double parse_double(int line, std::string_view key, std::string_view value) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) bad_value(line, key, value);
  return out;
}

std::uint64_t parse_uint(int line, std::string_view key, std::string_view value) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) bad_value(line, key, value);
  return out;
}

std::vector<std::uint64_t> parse_uint_list(int line, std::string_view key,
                                           std::string_view value) {
  std::vector<std::uint64_t> out;
  std::size_t pos = 0;
  while (pos <= value.size()) {
    const auto comma = value.find(',', pos);
    const auto item = trim(value.substr(pos, comma == std::string_view::npos ? value.npos
                                                                               : comma - pos));
    if (item.empty()) bad_value(line, key, value);
    out.push_back(parse_uint(line, key, item));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace

std::string_view to_string(Mode mode) {
  for (const auto& [name, m] : kModes) {
    if (m == mode) return name;
  }
  return "unknown";
}

ConfigError::ConfigError(int line, const std::string& message)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
      line_(line) {}

Rect RunConfig::effective_rect() const {
  if (rect) return *rect;
  if (rect_disabled) return Rect{0, 0, 0, 0};
  return Rect{shape.height / 4, shape.width / 4, shape.height / 2, shape.width / 2};
}

void apply_setting(RunConfig& c, std::string_view key, std::string_view value, int line) {
  auto num = [&] { return parse_double(line, key, value); };
  auto uint = [&] { return parse_uint(line, key, value); };
  auto size = [&] { return static_cast<std::size_t>(parse_uint(line, key, value)); };

  if (key == "mode") {
    const auto it = std::find_if(kModes.begin(), kModes.end(),
                                 [&](const auto& m) { return m.first == value; });
    if (it == kModes.end()) bad_value(line, key, value);
    c.mode = it->second;
  } else if (key == "seed") {
    c.seed = uint();
  } else if (key == "vocab") {
    c.vocab_size = size();
  } else if (key == "height") {
    c.shape.height = size();
  } else if (key == "width") {
    c.shape.width = size();
  } else if (key == "oracle_seed") {
    c.oracle_seed = uint();
  } else if (key == "context_sensitivity") {
    c.context_sensitivity = num();
  } else if (key == "background_kappa") {
    c.background_kappa = num();
  } else if (key == "foreground_kappa") {
    c.foreground_kappa = num();
  } else if (key == "rect") {
    if (value == "none") {
      c.rect.reset();
      c.rect_disabled = true;
    } else {
      const auto v = parse_uint_list(line, key, value);
      if (v.size() != 4) bad_value(line, key, value);
      c.rect = Rect{v[0], v[1], v[2], v[3]};
      c.rect_disabled = false;
    }
  } else if (key == "preset") {
    try {
      c.temp = preset(value);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(line, e.what());
    }
  } else if (key == "T0") {
    c.temp.t0 = num();
  } else if (key == "alpha") {
    c.temp.alpha = num();
  } else if (key == "theta") {
    c.temp.theta = num();
  } else if (key == "top_k") {
    c.sampling.top_k = size();
  } else if (key == "top_p") {
    c.sampling.top_p = num();
  } else if (key == "cfg_scale") {
    c.sampling.cfg_scale = num();
  } else if (key == "steps") {
    c.steps = size();
  } else if (key == "length") {
    c.length = size();
  } else if (key == "window") {
    c.window = size();
  } else if (key == "e") {
    c.accept.e = num();
  } else if (key == "lambda") {
    c.accept.lambda = num();
  } else if (key == "noise_decay") {
    if (value == "divisor") {
      c.accept.decay = NoiseDecay::kDivisor;
    } else if (value == "product") {
      c.accept.decay = NoiseDecay::kProduct;
    } else {
      bad_value(line, key, value);
    }
  } else if (key == "beta") {
    c.beta = num();
  } else if (key == "scales") {
    const auto v = parse_uint_list(line, key, value);
    c.scales.assign(v.begin(), v.end());
  } else if (key == "floor_temperature") {
    c.floor_temperature = num();
  } else if (key == "output_dir") {
    c.output_dir = std::string(value);
  } else {
    throw ConfigError(line, "unknown key '" + std::string(key) + "'");
  }
}

RunConfig parse_config(std::string_view text) {
  struct Entry {
    std::string key;
    std::string value;
    int line;
  };
  std::vector<Entry> entries;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view s = raw;
    if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(line, "expected 'key = value'");
    }
    const auto key = trim(s.substr(0, eq));
    const auto value = trim(s.substr(eq + 1));
    if (key.empty()) throw ConfigError(line, "missing key");
    if (value.empty()) throw ConfigError(line, "missing value for key '" + std::string(key) + "'");
    for (const auto& e : entries) {
      if (e.key == key) throw ConfigError(line, "duplicate key '" + std::string(key) + "'");
    }
    entries.push_back({std::string(key), std::string(value), line});
  }
  // A preset supplies defaults that explicit T0/alpha/theta then override.
  std::stable_partition(entries.begin(), entries.end(),
                        [](const Entry& e) { return e.key == "preset"; });
  RunConfig config;
  for (const auto& e : entries) apply_setting(config, e.key, e.value, e.line);
  return config;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open config file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

void validate(const RunConfig& c) {
  auto wrap = [](auto&& fn) {
    try {
      fn();
    } catch (const std::invalid_argument& e) {
      throw ParamError(e.what());
    } catch (const std::out_of_range& e) {
      throw ParamError(e.what());
    }
  };
  wrap([&] { oracle_config(c).validate(); });
  wrap([&] { c.temp.validate(); });
  wrap([&] { c.sampling.validate(); });
  if (c.sampling.top_k && *c.sampling.top_k < 1) throw ParamError("top_k must be >= 1");

  switch (c.mode) {
    case Mode::kNextToken:
    case Mode::kSpecBaseline:
    case Mode::kSpecEntropy:
      if (c.effective_length() > c.shape.size()) throw ParamError("length exceeds grid size");
      if (c.mode != Mode::kNextToken) {
        if (c.window < 1) throw ParamError("window must be >= 1");
        wrap([&] { c.accept.validate(); });
      }
      break;
    case Mode::kMask:
      if (c.steps < 1 || c.steps > c.shape.size()) {
        throw ParamError("steps must be in [1, height*width]");
      }
      break;
    case Mode::kScale: {
      if (c.scales.empty()) throw ParamError("scales must not be empty");
      if (c.scales.back() != c.shape.height || c.shape.height != c.shape.width) {
        throw ParamError("scale mode needs a square grid whose side is the last scale");
      }
      for (std::size_t i = 0; i < c.scales.size(); ++i) {
        if (c.scales[i] < 1 || (i > 0 && c.scales[i] < c.scales[i - 1])) {
          throw ParamError("scales must be positive and nondecreasing");
        }
      }
      ScaleTempParams sp{c.beta, c.scales.size(), c.floor_temperature};
      wrap([&] { sp.validate(); });
      break;
    }
  }
}

OracleConfig oracle_config(const RunConfig& c) {
  OracleConfig o;
  o.vocab_size = c.vocab_size;
  o.shape = c.shape;
  o.seed = c.oracle_seed;
  o.context_sensitivity = c.context_sensitivity;
  if (c.shape.size() == 0) return o;
  o.profile = profile_rect(c.shape, c.background_kappa, c.foreground_kappa, c.effective_rect());
  return o;
}

}  // namespace entropix::harness
