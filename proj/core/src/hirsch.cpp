#include "coarselab/hirsch.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace coarselab {

namespace {

struct Parser {
  const std::string& text;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  bool eat(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!eat(c)) throw ValidationError("expected '" + std::string(1, c) + "' at position " + std::to_string(pos));
  }

  std::string ident() {
    skip_ws();
    std::size_t start = pos;
    while (pos < text.size() && (std::isalpha(static_cast<unsigned char>(text[pos])) || text[pos] == '.')) ++pos;
    if (start == pos) throw ValidationError("expected a name at position " + std::to_string(pos));
    return text.substr(start, pos - start);
  }

  long long number() {
    skip_ws();
    std::size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (start == pos) throw ValidationError("expected a number at position " + std::to_string(pos));
    return std::stoll(text.substr(start, pos - start));
  }

  ExprPtr leaf(GroupExpression::Kind kind, long long param) {
    auto e = std::make_shared<GroupExpression>();
    e->kind = kind;
    e->param = param;
    return e;
  }

  ExprPtr parse() {
    const std::string name = ident();
    if (name == "T") return leaf(GroupExpression::Kind::Trivial, 0);
    auto e = std::make_shared<GroupExpression>();
    if (name == "F" || name == "Z" || name == "VA" || name == "Local") {
      expect('(');
      const long long v = number();
      expect(')');
      if (name == "F") {
        if (v < 1) throw ValidationError("finite group order must be >= 1");
        return leaf(GroupExpression::Kind::Finite, v);
      }
      if (v < 0) throw ValidationError("rank must be >= 0");
      if (name == "Z") return leaf(GroupExpression::Kind::FreeAbelian, v);
      if (name == "VA") return leaf(GroupExpression::Kind::VirtuallyAbelian, v);
      return leaf(GroupExpression::Kind::LocalRank, v);
    }
    if (name == "Ext") {
      e->kind = GroupExpression::Kind::Extension;
      expect('(');
      e->children.push_back(parse());
      expect(',');
      e->children.push_back(parse());
      expect(')');
      return e;
    }
    if (name == "Union") {
      e->kind = GroupExpression::Kind::IncreasingUnion;
      expect('(');
      e->children.push_back(parse());
      while (eat(',')) {
        skip_ws();
        if (text.compare(pos, 3, "...") == 0) {
          pos += 3;
          e->declared_limit = true;
          break;
        }
        e->children.push_back(parse());
      }
      expect(')');
      return e;
    }
    if (name == "Wreath") {
      e->kind = GroupExpression::Kind::Wreath;
      expect('(');
      e->children.push_back(parse());
      expect(',');
      e->children.push_back(parse());
      expect(')');
      if (e->children[0]->kind != GroupExpression::Kind::Finite)
        throw ValidationError("Wreath's first argument must be a finite group F(k)");
      return e;
    }
    throw ValidationError("unknown constructor: " + name);
  }
};

void check_tree(const ExprPtr& e) {
  if (!e) throw ValidationError("malformed expression tree");
  switch (e->kind) {
    case GroupExpression::Kind::Trivial:
    case GroupExpression::Kind::Finite:
    case GroupExpression::Kind::FreeAbelian:
    case GroupExpression::Kind::VirtuallyAbelian:
    case GroupExpression::Kind::LocalRank:
      if (!e->children.empty()) throw ValidationError("leaf with children");
      return;
    case GroupExpression::Kind::Extension:
      if (e->children.size() != 2) throw ValidationError("extension needs kernel and quotient");
      break;
    case GroupExpression::Kind::IncreasingUnion:
      if (e->children.empty()) throw ValidationError("union needs at least one term");
      break;
    case GroupExpression::Kind::Wreath:
      if (e->children.size() != 2 || e->children[0]->kind != GroupExpression::Kind::Finite)
        throw ValidationError("wreath needs a finite lamp group and a base");
      break;
  }
  for (const auto& c : e->children) check_tree(c);
}

}  // namespace

ExprPtr parse_expression(const std::string& text) {
  Parser p{text};
  auto e = p.parse();
  p.skip_ws();
  if (p.pos != text.size()) throw ValidationError("trailing input after expression");
  check_tree(e);
  return e;
}

long long hirsch(const ExprPtr& expr) {
  check_tree(expr);
  switch (expr->kind) {
    case GroupExpression::Kind::Trivial:
    case GroupExpression::Kind::Finite:
      return 0;
    case GroupExpression::Kind::FreeAbelian:
    case GroupExpression::Kind::VirtuallyAbelian:
    case GroupExpression::Kind::LocalRank:
      return expr->param;
    case GroupExpression::Kind::Extension:
      return hirsch(expr->children[0]) + hirsch(expr->children[1]);
    case GroupExpression::Kind::IncreasingUnion: {
      long long best = 0;
      for (const auto& c : expr->children) best = std::max(best, hirsch(c));
      return best;
    }
    case GroupExpression::Kind::Wreath:
      return hirsch(expr->children[1]);
  }
  throw ValidationError("malformed expression tree");
}

long long box_dimension_upper_bound(const ExprPtr& expr) { return hirsch(expr); }

namespace {

void derivation_impl(const ExprPtr& e, int depth, std::ostringstream& os) {
  for (int i = 0; i < depth; ++i) os << "  ";
  os << expression_to_text(e) << "  =>  h = " << hirsch(e);
  switch (e->kind) {
    case GroupExpression::Kind::Trivial:
    case GroupExpression::Kind::Finite:
      os << "   [finite: h = 0]";
      break;
    case GroupExpression::Kind::FreeAbelian:
    case GroupExpression::Kind::VirtuallyAbelian:
      os << "   [abelian rank]";
      break;
    case GroupExpression::Kind::LocalRank:
      os << "   [locally virtually Z^n: sup over the chain]";
      break;
    case GroupExpression::Kind::Extension:
      os << "   [extension: h = h(kernel) + h(quotient)]";
      break;
    case GroupExpression::Kind::IncreasingUnion:
      os << "   [increasing union: sup of the terms]";
      break;
    case GroupExpression::Kind::Wreath:
      os << "   [reduced wreath product by a finite group: h = h(base)]";
      break;
  }
  os << "\n";
  for (const auto& c : e->children) derivation_impl(c, depth + 1, os);
}

}  // namespace

std::string derivation(const ExprPtr& expr) {
  std::ostringstream os;
  derivation_impl(expr, 0, os);
  return os.str();
}

std::string expression_to_text(const ExprPtr& e) {
  std::ostringstream os;
  switch (e->kind) {
    case GroupExpression::Kind::Trivial:
      os << "T";
      break;
    case GroupExpression::Kind::Finite:
      os << "F(" << e->param << ")";
      break;
    case GroupExpression::Kind::FreeAbelian:
      os << "Z(" << e->param << ")";
      break;
    case GroupExpression::Kind::VirtuallyAbelian:
      os << "VA(" << e->param << ")";
      break;
    case GroupExpression::Kind::LocalRank:
      os << "Local(" << e->param << ")";
      break;
    case GroupExpression::Kind::Extension:
      os << "Ext(" << expression_to_text(e->children[0]) << ", " << expression_to_text(e->children[1]) << ")";
      break;
    case GroupExpression::Kind::IncreasingUnion: {
      os << "Union(";
      for (std::size_t i = 0; i < e->children.size(); ++i) {
        if (i) os << ", ";
        os << expression_to_text(e->children[i]);
      }
      if (e->declared_limit) os << ", ...";
      os << ")";
      break;
    }
    case GroupExpression::Kind::Wreath:
      os << "Wreath(" << expression_to_text(e->children[0]) << ", " << expression_to_text(e->children[1]) << ")";
      break;
  }
  return os.str();
}

}  // namespace coarselab
