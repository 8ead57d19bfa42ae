#include "ctxprob/formula.hpp"

#include <algorithm>
#include <cctype>

#include "ctxprob/errors.hpp"

namespace ctxprob {

struct Formula::Node {
  Kind kind;
  PredicateId predicate;
  std::vector<Formula> children;
};

std::string to_string(const PredicateId& predicate) {
  if (const auto* s = std::get_if<StateId>(&predicate)) {
    return "S:" + s->name + "(x)";
  }
  const auto& p = std::get<PropertyInContext>(predicate);
  return "P:" + p.property.name + "@" + p.context.name + "(x)";
}

Formula Formula::atom(PredicateId predicate) {
  return Formula(std::make_shared<const Node>(Node{Kind::kAtom, std::move(predicate), {}}));
}

Formula Formula::state(std::string name) { return atom(StateId{std::move(name)}); }

Formula Formula::property(std::string name, std::string context) {
  return atom(PropertyInContext{PropertyId{std::move(name)}, ContextId{std::move(context)}});
}

Formula Formula::negate(Formula operand) {
  return Formula(std::make_shared<const Node>(Node{Kind::kNot, {}, {std::move(operand)}}));
}

Formula Formula::conj(Formula lhs, Formula rhs) {
  return Formula(std::make_shared<const Node>(Node{Kind::kAnd, {}, {std::move(lhs), std::move(rhs)}}));
}

Formula Formula::disj(Formula lhs, Formula rhs) {
  return Formula(std::make_shared<const Node>(Node{Kind::kOr, {}, {std::move(lhs), std::move(rhs)}}));
}

Formula::Kind Formula::kind() const noexcept { return node_->kind; }

const PredicateId& Formula::predicate() const { return node_->predicate; }

const Formula& Formula::operand() const { return node_->children.at(0); }
const Formula& Formula::lhs() const { return node_->children.at(0); }
const Formula& Formula::rhs() const { return node_->children.at(1); }

std::size_t Formula::depth() const {
  switch (kind()) {
    case Kind::kAtom:
      return 0;
    case Kind::kNot:
      return 1 + operand().depth();
    default:
      return 1 + std::max(lhs().depth(), rhs().depth());
  }
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Formula::Kind::kAtom:
      return a.predicate() == b.predicate();
    case Formula::Kind::kNot:
      return a.operand() == b.operand();
    default:
      return a.lhs() == b.lhs() && a.rhs() == b.rhs();
  }
}

namespace {

int precedence(Formula::Kind kind) {
  switch (kind) {
    case Formula::Kind::kOr:
      return 1;
    case Formula::Kind::kAnd:
      return 2;
    case Formula::Kind::kNot:
      return 3;
    case Formula::Kind::kAtom:
      return 4;
  }
  return 0;
}

void print_into(const Formula& f, std::string& out);

void print_child(const Formula& child, bool parens, std::string& out) {
  if (parens) out += '(';
  print_into(child, out);
  if (parens) out += ')';
}

void print_into(const Formula& f, std::string& out) {
  switch (f.kind()) {
    case Formula::Kind::kAtom:
      out += to_string(f.predicate());
      return;
    case Formula::Kind::kNot:
      out += '!';
      print_child(f.operand(), precedence(f.operand().kind()) < precedence(f.kind()), out);
      return;
    default: {
      const int prec = precedence(f.kind());
      print_child(f.lhs(), precedence(f.lhs().kind()) < prec, out);
      out += f.kind() == Formula::Kind::kAnd ? " & " : " | ";
      // Left associativity: an equal-precedence right child needs parentheses.
      print_child(f.rhs(), precedence(f.rhs().kind()) <= prec, out);
      return;
    }
  }
}

bool is_name_char(char c) {
  auto u = static_cast<unsigned char>(c);
  return std::isalnum(u) || c == '_' || c == '+' || c == '-' || c == '.' || u >= 0x80;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Formula parse() {
    Formula f = disjunction();
    skip_space();
    if (pos_ != text_.size()) fail({"'&'", "'|'", "end of input"});
    return f;
  }

 private:
  Formula disjunction() {
    Formula f = conjunction();
    while (accept('|')) f = Formula::disj(std::move(f), conjunction());
    return f;
  }

  Formula conjunction() {
    Formula f = unary();
    while (accept('&')) f = Formula::conj(std::move(f), unary());
    return f;
  }

  Formula unary() {
    if (accept('!')) return Formula::negate(unary());
    if (accept('(')) {
      Formula f = disjunction();
      expect(')', "')'");
      return f;
    }
    skip_space();
    if (peek() == 'S') {
      ++pos_;
      expect(':', "':'");
      std::string name = identifier("state name");
      close_variable();
      return Formula::state(std::move(name));
    }
    if (peek() == 'P') {
      ++pos_;
      expect(':', "':'");
      std::string name = identifier("property name");
      expect('@', "'@'");
      std::string context = identifier("context name");
      close_variable();
      return Formula::property(std::move(name), std::move(context));
    }
    fail({"'!'", "'('", "'S:'", "'P:'"});
  }

  void close_variable() {
    expect('(', "'('");
    expect('x', "'x'");
    expect(')', "')'");
  }

  std::string identifier(const char* what) {
    skip_space();
    std::size_t start = pos_;
    while (pos_ < text_.size() && is_name_char(text_[pos_])) ++pos_;
    if (pos_ == start) fail({what});
    return std::string(text_.substr(start, pos_ - start));
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (peek() == c && pos_ < text_.size()) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c, const char* token) {
    if (!accept(c)) fail({token});
  }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    std::string found = pos_ < text_.size() ? "'" + std::string(1, text_[pos_]) + "'"
                                            : std::string("end of input");
    throw SyntaxError(pos_, std::move(expected), found);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

void collect_atoms(const Formula& f, std::vector<PredicateId>& out) {
  switch (f.kind()) {
    case Formula::Kind::kAtom:
      if (std::find(out.begin(), out.end(), f.predicate()) == out.end()) {
        out.push_back(f.predicate());
      }
      return;
    case Formula::Kind::kNot:
      collect_atoms(f.operand(), out);
      return;
    default:
      collect_atoms(f.lhs(), out);
      collect_atoms(f.rhs(), out);
  }
}

}  // namespace

Formula parse_formula(std::string_view text) { return Parser(text).parse(); }

std::string print(const Formula& f) {
  std::string out;
  print_into(f, out);
  return out;
}

std::vector<PredicateId> atoms_of(const Formula& f) {
  std::vector<PredicateId> out;
  collect_atoms(f, out);
  return out;
}

Formula reindex(const Formula& f, const ContextId& from, const ContextId& to) {
  switch (f.kind()) {
    case Formula::Kind::kAtom: {
      const auto* p = std::get_if<PropertyInContext>(&f.predicate());
      if (p == nullptr || p->context != from) return f;
      return Formula::atom(PropertyInContext{p->property, to});
    }
    case Formula::Kind::kNot:
      return Formula::negate(reindex(f.operand(), from, to));
    case Formula::Kind::kAnd:
      return Formula::conj(reindex(f.lhs(), from, to), reindex(f.rhs(), from, to));
    case Formula::Kind::kOr:
      return Formula::disj(reindex(f.lhs(), from, to), reindex(f.rhs(), from, to));
  }
  return f;
}

Formula random_formula(std::mt19937_64& rng, const std::vector<PredicateId>& atoms,
                       std::size_t max_depth) {
  if (atoms.empty()) throw std::invalid_argument("random_formula needs at least one atom");
  std::uniform_int_distribution<std::size_t> pick_atom(0, atoms.size() - 1);
  if (max_depth == 0) return Formula::atom(atoms[pick_atom(rng)]);
  std::uniform_int_distribution<int> shape(0, 3);
  switch (shape(rng)) {
    case 0:
      return Formula::atom(atoms[pick_atom(rng)]);
    case 1:
      return Formula::negate(random_formula(rng, atoms, max_depth - 1));
    case 2:
      return Formula::conj(random_formula(rng, atoms, max_depth - 1),
                           random_formula(rng, atoms, max_depth - 1));
    default:
      return Formula::disj(random_formula(rng, atoms, max_depth - 1),
                           random_formula(rng, atoms, max_depth - 1));
  }
}

}  // namespace ctxprob
