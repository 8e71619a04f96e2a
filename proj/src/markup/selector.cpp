#include "openlex/markup/selector.hpp"

#include <cctype>
#include <charconv>
#include <optional>
#include <unordered_set>

#include "openlex/error.hpp"

namespace openlex::markup {

namespace {

struct AttrTest {
  std::string name;
  std::optional<std::string> value;
};

struct Compound {
  std::string tag;  // empty or "*" = any
  std::string id;
  std::vector<std::string> classes;
  std::vector<AttrTest> attrs;
  enum class Pseudo { kNone, kNthChild, kNthOfType, kLastChild } pseudo = Pseudo::kNone;
  int nth = 0;
};

struct Step {
  bool child = false;  // '>' combinator; otherwise descendant
  Compound compound;
};

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_';
}

[[noreturn]] void bad(std::string_view sel, std::string_view why) {
  throw ConfigError("selector \"" + std::string(sel) + "\": " + std::string(why));
}

std::vector<Step> compile(std::string_view sel) {
  std::vector<Step> steps;
  std::size_t i = 0;
  bool pending_child = false;
  auto ident = [&]() {
    std::size_t s = i;
    while (i < sel.size() && ident_char(sel[i])) ++i;
    if (i == s) bad(sel, "expected identifier");
    return std::string(sel.substr(s, i - s));
  };
  while (i < sel.size()) {
    char c = sel[i];
    if (c == ' ' || c == '\t') {
      ++i;
      continue;
    }
    if (c == '>') {
      if (steps.empty() || pending_child) bad(sel, "dangling '>'");
      pending_child = true;
      ++i;
      continue;
    }
    Step st;
    st.child = pending_child;
    pending_child = false;
    Compound& cp = st.compound;
    bool any = false;
    while (i < sel.size() && sel[i] != ' ' && sel[i] != '\t' && sel[i] != '>') {
      char d = sel[i];
      any = true;
      if (d == '*') {
        ++i;
        cp.tag = "*";
      } else if (d == '#') {
        ++i;
        cp.id = ident();
      } else if (d == '.') {
        ++i;
        cp.classes.push_back(ident());
      } else if (d == '[') {
        std::size_t end = sel.find(']', i);
        if (end == std::string_view::npos) bad(sel, "unterminated '['");
        std::string_view body = sel.substr(i + 1, end - i - 1);
        AttrTest t;
        if (auto eq = body.find('='); eq != std::string_view::npos) {
          t.name = std::string(body.substr(0, eq));
          std::string_view v = body.substr(eq + 1);
          if (v.size() >= 2 && (v.front() == '"' || v.front() == '\'') && v.back() == v.front())
            v = v.substr(1, v.size() - 2);
          t.value = std::string(v);
        } else {
          t.name = std::string(body);
        }
        cp.attrs.push_back(std::move(t));
        i = end + 1;
      } else if (d == ':') {
        ++i;
        std::size_t s = i;
        while (i < sel.size() && (std::isalnum(static_cast<unsigned char>(sel[i])) || sel[i] == '-')) ++i;
        std::string_view name = sel.substr(s, i - s);
        auto arg = [&]() {
          if (i >= sel.size() || sel[i] != '(') bad(sel, "expected '('");
          std::size_t end = sel.find(')', i);
          if (end == std::string_view::npos) bad(sel, "unterminated '('");
          int n = 0;
          auto r = std::from_chars(sel.data() + i + 1, sel.data() + end, n);
          if (r.ec != std::errc{} || r.ptr != sel.data() + end || n < 1) bad(sel, "expected positive integer");
          i = end + 1;
          return n;
        };
        if (name == "first-child") {
          cp.pseudo = Compound::Pseudo::kNthChild;
          cp.nth = 1;
        } else if (name == "last-child") {
          cp.pseudo = Compound::Pseudo::kLastChild;
        } else if (name == "nth-child") {
          cp.pseudo = Compound::Pseudo::kNthChild;
          cp.nth = arg();
        } else if (name == "nth-of-type") {
          cp.pseudo = Compound::Pseudo::kNthOfType;
          cp.nth = arg();
        } else {
          bad(sel, "unsupported pseudo-class");
        }
      } else if (ident_char(d)) {
        cp.tag = ident();
      } else {
        bad(sel, std::string("unexpected character '") + d + "'");
      }
    }
    if (!any) bad(sel, "empty compound");
    steps.push_back(std::move(st));
  }
  if (pending_child) bad(sel, "dangling '>'");
  if (steps.empty()) bad(sel, "empty selector");
  return steps;
}

bool matches(const Node& n, const Node* parent, const Compound& c) {
  if (!n.is_element()) return false;
  if (!c.tag.empty() && c.tag != "*" && n.name != c.tag) return false;
  if (!c.id.empty()) {
    const std::string* id = n.attribute("id");
    if (!id || *id != c.id) return false;
  }
  for (auto& cls : c.classes)
    if (!n.has_class(cls)) return false;
  for (auto& a : c.attrs) {
    const std::string* v = n.attribute(a.name);
    if (!v || (a.value && *v != *a.value)) return false;
  }
  if (c.pseudo != Compound::Pseudo::kNone) {
    if (!parent) return false;
    auto kids = parent->element_children();
    if (c.pseudo == Compound::Pseudo::kLastChild) return !kids.empty() && kids.back() == &n;
    int k = 0;
    for (const Node* s : kids) {
      if (c.pseudo == Compound::Pseudo::kNthOfType && s->name != n.name) continue;
      ++k;
      if (s == &n) return k == c.nth;
    }
    return false;
  }
  return true;
}

void descend(const Node& n, const Compound& c, std::unordered_set<const Node*>& out) {
  for (auto& ch : n.children) {
    if (matches(*ch, &n, c)) out.insert(ch.get());
    descend(*ch, c, out);
  }
}

void in_order(const Node& n, const std::unordered_set<const Node*>& set, std::vector<const Node*>& out) {
  for (auto& ch : n.children) {
    if (set.count(ch.get())) out.push_back(ch.get());
    in_order(*ch, set, out);
  }
}

}  // namespace

std::vector<const Node*> select(const Node& scope, std::string_view selector) {
  auto steps = compile(selector);
  std::vector<const Node*> current{&scope};
  for (auto& st : steps) {
    std::unordered_set<const Node*> next;
    for (const Node* n : current) {
      if (st.child) {
        for (auto& ch : n->children)
          if (matches(*ch, n, st.compound)) next.insert(ch.get());
      } else {
        descend(*n, st.compound, next);
      }
    }
    current.clear();
    in_order(scope, next, current);
  }
  return current;
}

const Node* select_first(const Node& scope, std::string_view selector) {
  auto all = select(scope, selector);
  return all.empty() ? nullptr : all.front();
}

}  // namespace openlex::markup
