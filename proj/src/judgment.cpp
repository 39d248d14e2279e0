#include "nabla/judgment.hpp"

#include <cctype>
#include <tuple>

namespace nabla {

bool operator==(const Generic& a, const Generic& b) {
  if (a.index() != b.index()) return false;
  if (const auto* w = std::get_if<Lwff>(&a)) return *w == std::get<Lwff>(b);
  return std::get<Rwff>(a) == std::get<Rwff>(b);
}

bool GenericLess::operator()(const Generic& a, const Generic& b) const {
  if (a.index() != b.index()) return a.index() < b.index();
  if (const auto* ra = std::get_if<Rwff>(&a)) {
    const auto& rb = std::get<Rwff>(b);
    return std::tie(ra->kind, ra->lhs, ra->rhs) < std::tie(rb.kind, rb.lhs, rb.rhs);
  }
  const auto& wa = std::get<Lwff>(a);
  const auto& wb = std::get<Lwff>(b);
  if (wa.seq != wb.seq) return wa.seq < wb.seq;
  return CoreLess{}(wa.formula, wb.formula);
}

std::string print(const Label& l) { return l.name; }

std::string print(const LabelSeq& seq) {
  std::string out;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (i) out += ' ';
    out += seq[i].name;
  }
  return out;
}

std::string print(const Lwff& w) { return print(w.seq) + " : " + print(w.formula); }

std::string print(const Rwff& r) {
  return std::string(r.kind == RelKind::Le ? "le(" : "succ(") + r.lhs.name + "," +
         r.rhs.name + ")";
}

std::string print(const Generic& g) {
  return std::visit([](const auto& x) { return print(x); }, g);
}

void collect_labels(const Generic& g, std::set<Label>& out) {
  if (const auto* w = std::get_if<Lwff>(&g)) {
    out.insert(w->seq.begin(), w->seq.end());
  } else {
    const auto& r = std::get<Rwff>(g);
    out.insert(r.lhs);
    out.insert(r.rhs);
  }
}

bool mentions(const Generic& g, const Label& l) {
  if (const auto* w = std::get_if<Lwff>(&g)) {
    for (const Label& x : w->seq)
      if (x == l) return true;
    return false;
  }
  const auto& r = std::get<Rwff>(g);
  return r.lhs == l || r.rhs == l;
}

Lwff subst_label(const Lwff& w, const Label& from, const Label& to) {
  Lwff out = w;
  for (Label& x : out.seq)
    if (x == from) x = to;
  return out;
}

Rwff subst_label(const Rwff& r, const Label& from, const Label& to) {
  Rwff out = r;
  if (out.lhs == from) out.lhs = to;
  if (out.rhs == from) out.rhs = to;
  return out;
}

Generic subst_label(const Generic& g, const Label& from, const Label& to) {
  if (const auto* w = std::get_if<Lwff>(&g)) return subst_label(*w, from, to);
  return subst_label(std::get<Rwff>(g), from, to);
}

// Labels may carry trailing primes (b', b'') to follow the usual notation.
bool is_label_name(std::string_view s) {
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
  std::size_t i = 1;
  while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
  while (i < s.size() && s[i] == '\'') ++i;
  return i == s.size();
}

}  // namespace nabla
