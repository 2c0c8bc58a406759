#include "fockstar/serialize.hpp"

#include <cctype>
#include <charconv>
#include <utility>
#include <vector>

namespace fockstar {

ParseError::ParseError(int line, int column, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                         ": " + what),
      line_(line),
      column_(column) {}

std::string serialize_fock(const FockVector& f) {
  std::string out;
  for (const auto& [mu, c] : f.terms()) {
    out += std::to_string(mu.degree());
    out += "; ";
    out += mu.to_string();
    out += "; ";
    out += format_rational(c);
    out += '\n';
  }
  return out;
}

namespace {

class LineParser {
 public:
  LineParser(std::string_view text, int line) : text_(text), line_(line) {}

  void skip_ws() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
  }
  bool at_end() {
    skip_ws();
    return pos_ >= text_.size();
  }
  bool peek(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }
  void expect(char c) {
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  long integer() {
    skip_ws();
    long v = 0;
    auto first = text_.data() + pos_;
    auto [ptr, ec] = std::from_chars(first, text_.data() + text_.size(), v);
    if (ec != std::errc() || ptr == first) fail("expected integer");
    pos_ += static_cast<std::size_t>(ptr - first);
    return v;
  }
  std::string token() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected coefficient");
    return std::string(text_.substr(start, pos_ - start));
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(line_, static_cast<int>(pos_) + 1, what);
  }
  std::size_t pos() const { return pos_; }

 private:
  std::string_view text_;
  int line_;
  std::size_t pos_ = 0;
};

}  // namespace

FockVector deserialize_fock(std::string_view text) {
  std::vector<std::pair<MultiIndex, Rational>> terms;
  int max_degree = 0;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    ++line_no;
    start = end + 1;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    LineParser p(line, line_no);
    if (p.at_end()) {
      if (end == text.size()) break;
      continue;
    }
    const long degree = p.integer();
    if (degree < 0) p.fail("negative degree");
    p.expect(';');
    std::vector<MultiIndex::Entry> entries;
    while (p.peek('(')) {
      p.expect('(');
      const long coord = p.integer();
      p.expect(',');
      const long freq = p.integer();
      p.expect(',');
      const long flag = p.integer();
      p.expect(')');
      p.expect('^');
      const long mult = p.integer();
      if (coord < 1) p.fail("coordinate must be >= 1");
      if (flag != 0 && flag != 1) p.fail("dual flag must be 0 or 1");
      if (mult < 1) p.fail("multiplicity must be >= 1");
      entries.push_back({{static_cast<int>(coord), static_cast<int>(freq), flag == 1},
                         static_cast<int>(mult)});
    }
    p.expect(';');
    const std::size_t coeff_col = p.pos();
    std::string coeff_text = p.token();
    Rational coeff;
    try {
      coeff = parse_rational(coeff_text);
    } catch (const std::invalid_argument& e) {
      throw ParseError(line_no, static_cast<int>(coeff_col) + 2, e.what());
    }
    if (!p.at_end()) p.fail("trailing characters");
    MultiIndex mu = MultiIndex::from_entries(std::move(entries));
    if (mu.degree() != degree) p.fail("degree does not match multiplicities");
    max_degree = std::max(max_degree, mu.degree());
    terms.emplace_back(std::move(mu), std::move(coeff));
    if (end == text.size()) break;
  }
  FockVector out(max_degree);
  for (const auto& [mu, c] : terms) out.add_term(mu, c);
  return out;
}

}  // namespace fockstar
