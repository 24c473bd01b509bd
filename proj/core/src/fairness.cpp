#include "fairmab/fairness.hpp"

#include <numeric>
#include <stdexcept>

namespace fairmab {

namespace {

using i128 = __int128;

GroupShare reduced(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::invalid_argument("fairness share: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return {num, den};
}

}  // namespace

GroupShare parse_share(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("fairness share: empty string");
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    std::size_t pos_n = 0, pos_d = 0;
    const std::int64_t num = std::stoll(text.substr(0, slash), &pos_n);
    const std::int64_t den = std::stoll(text.substr(slash + 1), &pos_d);
    if (pos_n != slash || pos_d != text.size() - slash - 1)
      throw std::invalid_argument("fairness share: bad rational '" + text + "'");
    return reduced(num, den);
  }

  // Decimal literal: sign, integer part, optional fraction of <= 15 digits.
  std::size_t i = 0;
  bool negative = false;
  if (text[i] == '+' || text[i] == '-') negative = text[i++] == '-';
  std::int64_t num = 0, den = 1;
  bool any_digit = false;
  for (; i < text.size() && text[i] >= '0' && text[i] <= '9'; ++i) {
    num = num * 10 + (text[i] - '0');
    any_digit = true;
    if (num > (std::int64_t{1} << 50))
      throw std::invalid_argument("fairness share: value too large");
  }
  if (i < text.size() && text[i] == '.') {
    ++i;
    for (; i < text.size() && text[i] >= '0' && text[i] <= '9'; ++i) {
      num = num * 10 + (text[i] - '0');
      den *= 10;
      any_digit = true;
      if (den > 1'000'000'000'000'000LL)
        throw std::invalid_argument("fairness share: too many decimal digits");
    }
  }
  if (!any_digit || i != text.size())
    throw std::invalid_argument("fairness share: bad decimal '" + text + "'");
  return reduced(negative ? -num : num, den);
}

FairnessConfig FairnessConfig::parse(const std::vector<std::string>& texts) {
  std::vector<GroupShare> beta;
  beta.reserve(texts.size());
  for (const auto& t : texts) beta.push_back(parse_share(t));
  return FairnessConfig(std::move(beta));
}

std::vector<std::string> FairnessConfig::violations(int num_groups) const {
  std::vector<std::string> out;
  if (static_cast<int>(beta_.size()) != num_groups) {
    out.push_back("beta has " + std::to_string(beta_.size()) +
                  " entries for " + std::to_string(num_groups) + " groups");
    return out;
  }
  const int m = num_groups;
  for (int g = 0; g < m; ++g) {
    const auto& s = beta_[static_cast<std::size_t>(g)];
    if (s.num <= 0)
      out.push_back("beta_" + std::to_string(g) + " must be > 0");
    else if (i128(s.num) * m > i128(s.den))
      out.push_back("beta_" + std::to_string(g) + " > 1/m (m = " +
                    std::to_string(m) + ")");
  }
  // Exact running sum with gcd reduction at every step.
  std::int64_t sn = 0, sd = 1;
  for (const auto& s : beta_) {
    const i128 n128 = i128(sn) * s.den + i128(s.num) * sd;
    const i128 d128 = i128(sd) * s.den;
    if (n128 > INT64_MAX || d128 > INT64_MAX)
      throw std::invalid_argument("fairness: beta sum overflows exact arithmetic");
    const auto r = reduced(static_cast<std::int64_t>(n128),
                           static_cast<std::int64_t>(d128));
    sn = r.num;
    sd = r.den;
  }
  if (sn >= sd) out.push_back("sum of beta must be < 1");
  return out;
}

std::int64_t FairnessConfig::floor_at(int g, std::int64_t t) const {
  const auto& s = beta_[static_cast<std::size_t>(g)];
  const i128 prod = i128(s.num) * t;
  return static_cast<std::int64_t>(prod / s.den);
}

bool FairnessConfig::slack_positive(int g, std::int64_t t,
                                    std::int64_t pulls) const {
  const auto& s = beta_[static_cast<std::size_t>(g)];
  return i128(s.num) * t > i128(s.den) * pulls;
}

int FairnessConfig::compare_slack(int g1, std::int64_t pulls1, int g2,
                                  std::int64_t pulls2, std::int64_t t) const {
  const auto& a = beta_[static_cast<std::size_t>(g1)];
  const auto& b = beta_[static_cast<std::size_t>(g2)];
  // (a.num*t - a.den*pulls1)/a.den vs (b.num*t - b.den*pulls2)/b.den
  const i128 lhs = (i128(a.num) * t - i128(a.den) * pulls1) * b.den;
  const i128 rhs = (i128(b.num) * t - i128(b.den) * pulls2) * a.den;
  if (lhs < rhs) return -1;
  if (lhs > rhs) return 1;
  return 0;
}

std::string FairnessConfig::share_text(int g) const {
  const auto& s = beta_[static_cast<std::size_t>(g)];
  return std::to_string(s.num) + "/" + std::to_string(s.den);
}

}  // namespace fairmab
