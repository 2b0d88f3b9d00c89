#include "qtg/instance.hpp"

#include <charconv>
#include <cstdio>
#include <stdexcept>

#include "qtg/errors.hpp"
#include "qtg/rng.hpp"

namespace qtg {

void validate_instance(const KnapsackInstance& instance) {
  if (instance.profits.empty())
    throw std::invalid_argument("instance has no items");
  if (instance.profits.size() != instance.costs.size())
    throw std::invalid_argument("profit/cost count mismatch");
  if (instance.capacity < 1)
    throw std::invalid_argument("capacity must be positive");
  for (std::size_t i = 0; i < instance.size(); ++i) {
    if (instance.profits[i] < 1)
      throw std::invalid_argument("profit of item " + std::to_string(i + 1) +
                                  " must be positive");
    if (instance.costs[i] < 1)
      throw std::invalid_argument("cost of item " + std::to_string(i + 1) +
                                  " must be positive");
  }
}

Assignment make_assignment(const KnapsackInstance& instance,
                           std::vector<std::uint8_t> bits) {
  if (bits.size() != instance.size())
    throw std::invalid_argument("bit count does not match item count");
  Assignment out;
  std::int64_t cost = 0;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i]) {
      out.profit += instance.profits[i];
      cost += instance.costs[i];
    }
  }
  if (cost > instance.capacity)
    throw std::invalid_argument("selection exceeds capacity");
  out.bits = std::move(bits);
  out.residual_capacity = instance.capacity - cost;
  return out;
}

std::string bits_string(const std::vector<std::uint8_t>& bits) {
  std::string out(bits.size(), '0');
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (bits[i]) out[i] = '1';
  return out;
}

namespace {

// Splits on '\n'; a lone final empty segment (trailing newline) is dropped.
std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) {
      lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

std::int64_t parse_int(std::string_view token, std::size_t line_no,
                       const char* what) {
  std::int64_t value = 0;
  auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size())
    throw ParseError(line_no, std::string("malformed ") + what + " '" +
                                  std::string(token) + "'");
  return value;
}

} // namespace

KnapsackInstance parse_instance(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw ParseError(1, "empty instance file");

  const std::int64_t n = parse_int(strip_cr(lines[0]), 1, "item count");
  if (n < 1) throw ParseError(1, "item count must be positive");
  if (lines.size() < 2) throw ParseError(2, "missing capacity line");

  KnapsackInstance instance;
  instance.capacity = parse_int(strip_cr(lines[1]), 2, "capacity");
  if (instance.capacity < 1) throw ParseError(2, "capacity must be positive");

  instance.profits.reserve(static_cast<std::size_t>(n));
  instance.costs.reserve(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    const std::size_t line_no = static_cast<std::size_t>(i) + 3;
    if (line_no > lines.size())
      throw ParseError(line_no, "expected " + std::to_string(n) +
                                    " item lines, found " +
                                    std::to_string(lines.size() - 2));
    std::string_view line = strip_cr(lines[line_no - 1]);
    const std::size_t sep = line.find(' ');
    if (sep == std::string_view::npos || line.find(' ', sep + 1) != std::string_view::npos)
      throw ParseError(line_no, "expected 'profit cost'");
    const std::int64_t p = parse_int(line.substr(0, sep), line_no, "profit");
    const std::int64_t z = parse_int(line.substr(sep + 1), line_no, "cost");
    if (p < 1) throw ParseError(line_no, "profit must be positive");
    if (z < 1) throw ParseError(line_no, "cost must be positive");
    instance.profits.push_back(p);
    instance.costs.push_back(z);
  }
  if (lines.size() > static_cast<std::size_t>(n) + 2)
    throw ParseError(static_cast<std::size_t>(n) + 3,
                     "expected " + std::to_string(n) + " item lines, found " +
                         std::to_string(lines.size() - 2));
  return instance;
}

std::string serialize_instance(const KnapsackInstance& instance) {
  validate_instance(instance);
  std::string out = std::to_string(instance.size()) + "\n" +
                    std::to_string(instance.capacity) + "\n";
  for (std::size_t i = 0; i < instance.size(); ++i) {
    out += std::to_string(instance.profits[i]);
    out += ' ';
    out += std::to_string(instance.costs[i]);
    out += '\n';
  }
  return out;
}

std::string instance_digest(const KnapsackInstance& instance) {
  const std::string text = serialize_instance(instance);
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(hash));
  return std::string(buf);
}

KnapsackInstance generate_instance(const GenerateConfig& config) {
  if (config.item_count < 1)
    throw std::invalid_argument("item count must be positive");
  if (config.profit_min < 1 || config.profit_min > config.profit_max)
    throw std::invalid_argument("invalid profit range");
  if (config.cost_min < 1 || config.cost_min > config.cost_max)
    throw std::invalid_argument("invalid cost range");
  if (!(config.capacity_fraction > 0.0) || config.capacity_fraction > 1.0)
    throw std::invalid_argument("capacity fraction must be in (0, 1]");

  Mt19937 rng(config.seed);
  KnapsackInstance instance;
  instance.profits.reserve(config.item_count);
  instance.costs.reserve(config.item_count);
  std::int64_t total_cost = 0;
  std::int64_t min_cost = config.cost_max;
  for (std::size_t i = 0; i < config.item_count; ++i) {
    instance.profits.push_back(static_cast<std::int64_t>(rng.uniform_in_range(
        static_cast<std::uint64_t>(config.profit_min),
        static_cast<std::uint64_t>(config.profit_max))));
    const auto cost = static_cast<std::int64_t>(rng.uniform_in_range(
        static_cast<std::uint64_t>(config.cost_min),
        static_cast<std::uint64_t>(config.cost_max)));
    instance.costs.push_back(cost);
    total_cost += cost;
    min_cost = std::min(min_cost, cost);
  }
  const auto scaled = static_cast<std::int64_t>(
      config.capacity_fraction * static_cast<double>(total_cost));
  instance.capacity = std::max(min_cost, scaled);
  return instance;
}

} // namespace qtg
