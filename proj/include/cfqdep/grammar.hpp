#pragma once

#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace cfqdep {

// One context-free production. RHS symbols are nonterminals, lexical
// categories (preterminals fed by the Lexicon), or quoted literal tokens.
struct Production {
  std::string lhs;
  std::vector<std::string> rhs;
  std::vector<bool> literal;  // per RHS slot: true if the symbol is a quoted literal
  std::string rule_id;        // canonical "LHS -> sym sym ..." text, unique per grammar
  int index = -1;             // position within Grammar::productions()
};

// Immutable after load; safe to share across threads.
//
// File format: one production per line, `LHS -> RHS1 RHS2 ...`; `#` starts a
// comment; `%preterm NAME...` declares lexical categories; RHS tokens in
// double quotes are literal terminals matched against the surface string.
class Grammar {
 public:
  static Grammar load(std::istream& in, const std::string& source_name = "<grammar>");
  static Grammar load_file(const std::string& path);

  const std::vector<Production>& productions() const { return productions_; }
  const Production& production(int index) const { return productions_.at(static_cast<size_t>(index)); }
  const std::set<std::string>& preterminals() const { return preterminals_; }
  const std::string& start_symbol() const { return start_; }

  bool is_nonterminal(const std::string& sym) const { return by_lhs_.count(sym) != 0; }
  bool is_preterminal(const std::string& sym) const { return preterminals_.count(sym) != 0; }

  // Production indices with the given LHS, in file order; nullptr if none.
  const std::vector<int>* productions_for(const std::string& lhs) const;

  // Every quoted literal appearing on any RHS.
  const std::set<std::string>& literal_terminals() const { return literals_; }

  const Production* find_rule(const std::string& rule_id) const;

 private:
  std::vector<Production> productions_;
  std::map<std::string, std::vector<int>> by_lhs_;
  std::set<std::string> preterminals_;
  std::set<std::string> literals_;
  std::string start_ = "S";
};

// Surface token -> lexical categories. A token may be ambiguous across
// categories. Immutable in normal use; add() exists so callers can merge in
// anonymization name pools before parsing.
class Lexicon {
 public:
  static Lexicon load(std::istream& in, const std::string& source_name = "<lexicon>");
  static Lexicon load_file(const std::string& path);

  void add(const std::string& token, const std::string& category);

  // Sorted unique categories for the token; nullptr when unknown.
  const std::vector<std::string>* categories(const std::string& token) const;

  size_t size() const { return entries_.size(); }
  const std::set<std::string>& category_names() const { return category_names_; }

 private:
  std::map<std::string, std::vector<std::string>> entries_;
  std::set<std::string> category_names_;
};

struct TokenSequence {
  std::vector<std::string> tokens;
  std::string source_id;
};

// Whitespace split plus CFQ-specific peeling: `?`, `,` and the clitic `'s`
// become standalone tokens. Throws DataError on empty input.
TokenSequence tokenize(const std::string& question, const std::string& source_id = "");

struct TreeNode {
  std::string label;     // symbol: nonterminal, category, or literal text
  int rule_index = -1;   // index into Grammar::productions(); -1 for leaves
  int token_index = -1;  // leaves only
  int begin = 0;         // half-open token span
  int end = 0;
  std::vector<TreeNode> children;

  bool is_leaf() const { return rule_index < 0; }
};

struct ConstituencyTree {
  TreeNode root;
  // Preorder (rule_id | leaf label) sequence; total order over parses of one
  // sentence, used for deterministic output ordering and tie-breaking.
  std::vector<std::string> derivation_key;
};

// All complete parses of the token sequence rooted at the start symbol,
// sorted by derivation_key. Empty result means no parse. Throws DataError
// naming the token when some token has no category and matches no literal.
std::vector<ConstituencyTree> parse(const TokenSequence& tokens, const Grammar& grammar,
                                    const Lexicon& lexicon);

// Lexicographically-smallest-derivation tie-break. Warns on ambiguity via
// `warn` (pass nullptr to silence); throws DataError when `strict` and more
// than one parse, or when the list is empty.
const ConstituencyTree& select_parse(const std::vector<ConstituencyTree>& parses,
                                     bool strict = false, const std::string& context_id = "",
                                     std::ostream* warn = nullptr);

// Re-checks every internal node against its production and the leaf
// frontier against the token sequence. Throws DataError on violation.
void check_tree(const ConstituencyTree& tree, const Grammar& grammar,
                const TokenSequence& tokens);

}  // namespace cfqdep
