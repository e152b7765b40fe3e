#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

#include "pfk/fields.hpp"

namespace pfk {

namespace {

struct NumberToken {
  double value;
  std::size_t offset;
  std::size_t length;
};

class FieldParser {
 public:
  FieldParser(std::string_view text, int dimension) : text_(text), dimension_(dimension) {}

  ScalarField parse_all() {
    ScalarField field = parse_field();
    if (pos_ != text_.size()) fail("unexpected trailing input", pos_, text_.size() - pos_);
    return field;
  }

 private:
  [[noreturn]] void fail(const std::string& message, std::size_t offset, std::size_t length) const {
    throw FieldParseError(message, offset, length == 0 ? 1 : length);
  }

  ScalarField parse_field() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    const std::string_view name = text_.substr(start, pos_ - start);
    if (name.empty()) fail("expected a field kind (const, cos, bump, sep, zero)", start, 1);
    if (name == "zero") return ScalarField::constant(0.0);
    if (name != "const" && name != "cos" && name != "bump" && name != "sep") {
      fail("unknown field kind '" + std::string(name) + "'", start, name.size());
    }
    if (pos_ >= text_.size() || text_[pos_] != ':') fail("expected ':' after '" + std::string(name) + "'", pos_, 1);
    ++pos_;
    const std::size_t list_start = pos_;
    std::vector<NumberToken> numbers = parse_numbers();
    const std::size_t list_length = pos_ - list_start;

    if (name == "const") {
      expect_count(numbers, 1, 1, list_start, list_length, "const takes exactly one value");
      return ScalarField::constant(numbers[0].value);
    }
    if (name == "cos") {
      expect_count(numbers, 2, 1 + static_cast<std::size_t>(dimension_), list_start, list_length,
                   "cos takes an amplitude and 1.." + std::to_string(dimension_) + " wavevector components");
      Point k(dimension_);
      for (std::size_t i = 1; i < numbers.size(); ++i) k[static_cast<int>(i - 1)] = numbers[i].value;
      return ScalarField::cosine(numbers[0].value, k);
    }
    if (name == "bump") {
      expect_count(numbers, 3, 3, list_start, list_length, "bump takes amplitude,center,width");
      if (!(numbers[2].value > 0.0)) fail("bump width must be positive", numbers[2].offset, numbers[2].length);
      return ScalarField::gaussian_bump(numbers[0].value, Point::filled(dimension_, numbers[1].value),
                                        numbers[2].value);
    }
    expect_count(numbers, 3, 3, list_start, list_length, "sep takes three time-polynomial coefficients");
    if (pos_ >= text_.size() || text_[pos_] != '*') fail("expected '*' followed by the spatial field", pos_, 1);
    ++pos_;
    ScalarField space = parse_field();
    return ScalarField::separable({numbers[0].value, numbers[1].value, numbers[2].value}, std::move(space));
  }

  std::vector<NumberToken> parse_numbers() {
    std::vector<NumberToken> out;
    while (true) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && text_[pos_] != ',' && text_[pos_] != '*') ++pos_;
      const std::string_view token = text_.substr(start, pos_ - start);
      if (token.empty()) fail("expected a number", start, 1);
      double value = 0.0;
      const auto result = std::from_chars(token.data(), token.data() + token.size(), value);
      if (result.ec != std::errc{} || result.ptr != token.data() + token.size() || !std::isfinite(value)) {
        fail("invalid number '" + std::string(token) + "'", start, token.size());
      }
      out.push_back({value, start, token.size()});
      if (pos_ < text_.size() && text_[pos_] == ',') {
        ++pos_;
        continue;
      }
      return out;
    }
  }

  void expect_count(const std::vector<NumberToken>& numbers, std::size_t lo, std::size_t hi, std::size_t offset,
                    std::size_t length, const std::string& message) const {
    if (numbers.size() < lo || numbers.size() > hi) fail(message, offset, length);
  }

  std::string_view text_;
  int dimension_;
  std::size_t pos_ = 0;
};

}  // namespace

ScalarField parse_field(std::string_view text, int dimension) {
  if (dimension < 1 || dimension > kMaxDimension) throw std::invalid_argument("parse_field: bad dimension");
  return FieldParser(text, dimension).parse_all();
}

std::string format_parse_error(std::string_view text, const FieldParseError& error) {
  std::ostringstream out;
  out << "error: " << error.what() << "\n  " << text << "\n  ";
  for (std::size_t i = 0; i < error.offset(); ++i) out << ' ';
  for (std::size_t i = 0; i < error.length(); ++i) out << '^';
  return out.str();
}

std::vector<double> parse_number_list(std::string_view text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = text.find(',', pos);
    const std::string_view token = text.substr(pos, comma == std::string_view::npos ? text.npos : comma - pos);
    double value = 0.0;
    const auto result = std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || result.ec != std::errc{} || result.ptr != token.data() + token.size()) {
      throw std::invalid_argument("invalid number '" + std::string(token) + "' in list '" + std::string(text) + "'");
    }
    out.push_back(value);
    if (comma == std::string_view::npos) return out;
    pos = comma + 1;
  }
}

}  // namespace pfk
