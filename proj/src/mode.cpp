#include "fockstar/mode.hpp"

#include "fockstar/scalar.hpp"

#include <algorithm>
#include <stdexcept>

namespace fockstar {

std::string ModeIndex::to_string() const {
  return "(" + std::to_string(coord) + "," + std::to_string(freq) + "," + (dual ? "1" : "0") + ")";
}

std::vector<ModeIndex> Truncation::primal_modes() const {
  std::vector<ModeIndex> out;
  for (int i = 1; i <= d; ++i) {
    for (int k = -K; k <= K; ++k) out.push_back(primal(i, k));
  }
  return out;
}

std::vector<ModeIndex> Truncation::doubled_modes() const {
  std::vector<ModeIndex> out;
  for (int i = 1; i <= d; ++i) {
    for (int k = -K; k <= K; ++k) {
      out.push_back(primal(i, k));
      out.push_back(dual(i, k));
    }
  }
  return out;
}

MultiIndex::MultiIndex(std::initializer_list<ModeIndex> modes) {
  std::vector<Entry> entries;
  for (const auto& m : modes) entries.push_back({m, 1});
  *this = from_entries(std::move(entries));
}

MultiIndex MultiIndex::of(const ModeIndex& mode, int mult) {
  return from_entries({{mode, mult}});
}

MultiIndex MultiIndex::from_entries(std::vector<Entry> entries) {
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.mode < b.mode; });
  MultiIndex out;
  for (const auto& e : entries) {
    if (e.mult <= 0) throw std::invalid_argument("multiplicity must be positive");
    if (!out.entries_.empty() && out.entries_.back().mode == e.mode) {
      out.entries_.back().mult += e.mult;
    } else {
      out.entries_.push_back(e);
    }
    out.degree_ += e.mult;
  }
  return out;
}

int MultiIndex::multiplicity(const ModeIndex& mode) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), mode,
                             [](const Entry& e, const ModeIndex& m) { return e.mode < m; });
  return (it != entries_.end() && it->mode == mode) ? it->mult : 0;
}

bool MultiIndex::has_dual() const {
  return std::any_of(entries_.begin(), entries_.end(), [](const Entry& e) { return e.mode.dual; });
}

MultiIndex MultiIndex::operator+(const MultiIndex& other) const {
  MultiIndex out;
  out.entries_.reserve(entries_.size() + other.entries_.size());
  auto a = entries_.begin();
  auto b = other.entries_.begin();
  while (a != entries_.end() || b != other.entries_.end()) {
    if (b == other.entries_.end() || (a != entries_.end() && a->mode < b->mode)) {
      out.entries_.push_back(*a++);
    } else if (a == entries_.end() || b->mode < a->mode) {
      out.entries_.push_back(*b++);
    } else {
      out.entries_.push_back({a->mode, a->mult + b->mult});
      ++a;
      ++b;
    }
  }
  out.degree_ = degree_ + other.degree_;
  return out;
}

MultiIndex MultiIndex::without_one(const ModeIndex& mode) const {
  MultiIndex out = *this;
  auto it = std::lower_bound(out.entries_.begin(), out.entries_.end(), mode,
                             [](const Entry& e, const ModeIndex& m) { return e.mode < m; });
  if (it == out.entries_.end() || it->mode != mode) {
    throw std::logic_error("without_one: mode not present");
  }
  if (--it->mult == 0) out.entries_.erase(it);
  --out.degree_;
  return out;
}

std::size_t MultiIndex::hash() const {
  std::size_t h = 0x9e3779b97f4a7c15ULL;
  for (const auto& e : entries_) {
    std::size_t v = (static_cast<std::size_t>(e.mode.coord) << 40) ^
                    (static_cast<std::size_t>(e.mode.freq + 0x8000) << 20) ^
                    (static_cast<std::size_t>(e.mode.dual) << 19) ^ static_cast<std::size_t>(e.mult);
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

std::string MultiIndex::to_string() const {
  std::string out;
  for (const auto& e : entries_) {
    if (!out.empty()) out += ' ';
    out += e.mode.to_string() + "^" + std::to_string(e.mult);
  }
  return out;
}

std::strong_ordering operator<=>(const MultiIndex& a, const MultiIndex& b) {
  if (auto c = a.degree_ <=> b.degree_; c != 0) return c;
  return std::lexicographical_compare_three_way(a.entries_.begin(), a.entries_.end(),
                                                b.entries_.begin(), b.entries_.end());
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto slash = s.find('/');
  auto valid_int = [](const std::string& t) {
    if (t.empty()) return false;
    std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i) {
      if (t[i] < '0' || t[i] > '9') return false;
    }
    return true;
  };
  std::string num = slash == std::string::npos ? s : s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!num.empty() && num[0] == '+') num.erase(0, 1);
  if (!valid_int(num) || !valid_int(den) || den[0] == '-' || den[0] == '+') {
    throw std::invalid_argument("malformed rational '" + s + "'");
  }
  mpz_class n(num, 10), q(den, 10);
  if (q == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
  Rational r(n, q);
  r.canonicalize();
  return r;
}

std::string format_rational(const Rational& x) {
  return x.get_num().get_str() + "/" + x.get_den().get_str();
}

}  // namespace fockstar
