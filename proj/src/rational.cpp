#include "tsetlin/rational.hpp"

#include <cctype>
#include <cstdlib>

namespace tsetlin {

namespace {

std::int64_t parse_int(const std::string& text) {
  std::size_t pos = 0;
  const long long v = std::stoll(text, &pos);
  if (pos != text.size()) throw std::invalid_argument("Rational: bad integer '" + text + "'");
  return v;
}

} // namespace

Rational Rational::parse(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("Rational: empty string");
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    return Rational(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
  }
  const auto dot = text.find('.');
  if (dot == std::string::npos) return Rational(parse_int(text));
  const std::string head = text.substr(0, dot);
  const std::string frac = text.substr(dot + 1);
  if (frac.empty()) return Rational(parse_int(head));
  for (char c : frac)
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw std::invalid_argument("Rational: bad decimal '" + text + "'");
  if (frac.size() > 18) throw std::invalid_argument("Rational: too many decimal digits in '" + text + "'");
  std::int64_t den = 1;
  for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
  const bool negative = !head.empty() && head[0] == '-';
  const std::int64_t whole = head.empty() || head == "-" ? 0 : parse_int(head);
  const std::int64_t frac_num = parse_int(frac);
  Rational magnitude = Rational(whole < 0 ? -whole : whole) + Rational(frac_num, den);
  return negative || whole < 0 ? -magnitude : magnitude;
}

std::string Rational::to_string() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

} // namespace tsetlin
