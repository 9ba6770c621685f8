#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cfqdep/grammar.hpp"

namespace cfqdep {

struct DepArc {
  int head = -1;  // token index; -1 = ROOT
  std::string label;
};

struct DependencyTree {
  std::vector<std::string> tokens;
  std::vector<std::string> categories;  // CFQ category label per token
  std::vector<DepArc> arcs;             // one per token

  int size() const { return static_cast<int>(tokens.size()); }
  int root() const;  // index of the token headed by ROOT; -1 if none

  bool operator==(const DependencyTree& o) const;
};

// UD relations this corpus can produce.
const std::set<std::string>& label_inventory();

// Empty string when the tree satisfies single-root / single-head /
// acyclicity / label-closure; otherwise a description of the violation.
std::string validate_tree(const DependencyTree& tree);

// The CFQ category recorded for a token: open classes map to their part of
// speech name (verb, entity, noun, role, adjective); function words keep
// their lowercased surface form.
std::string token_category(const std::string& leaf_label, const std::string& surface);

constexpr int kAttachHead = -1;

struct DepRuleSlot {
  bool is_head = false;
  bool pending = false;
  std::string label;
  int attach_to = kAttachHead;  // child index whose head receives this dependent
};

struct DepRule {
  std::string rule_id;
  int head_child = 0;
  std::vector<DepRuleSlot> slots;  // one per RHS position
  int pending_attach_child = -1;   // <0: pass pendings up
  std::string pending_attach_label;
};

class DepRuleSet {
 public:
  // Validates one rule per production, label inventory membership, and
  // slot/arity agreement against the grammar.
  static DepRuleSet load(std::istream& in, const Grammar& grammar,
                         const std::string& source_name = "<deprules>");
  static DepRuleSet load_file(const std::string& path, const Grammar& grammar);

  const DepRule& for_production(int rule_index) const;
  size_t size() const { return rules_.size(); }

 private:
  std::vector<DepRule> rules_;  // indexed by production index
};

// Head token plus tokens still awaiting a head, for one constituent.
struct PartialDeps {
  int head_token = -1;
  std::vector<int> pending;  // ascending token indices
};

// One bottom-up step: attach non-head children per the rule, collect or
// discharge pending tokens, and pass the constituent head up. Arcs are
// appended to `arcs` (indexed by dependent token).
PartialDeps apply_dep_rule(const DepRule& rule, const std::vector<PartialDeps>& children,
                           std::vector<DepArc>& arcs);

DependencyTree to_dependencies(const ConstituencyTree& tree, const DepRuleSet& rules,
                               const Grammar& grammar, const TokenSequence& tokens);

struct TokenSpan {
  int begin = 0;
  int end = 0;  // half-open
};

struct AnonymizationMap {
  struct Entry {
    TokenSpan span;          // in the original sequence
    std::string original;    // space-joined original tokens
    std::string replacement;
  };
  std::vector<Entry> entries;
};

// Replaces each span with the next unused pool name, left to right.
std::pair<TokenSequence, AnonymizationMap> anonymize(const TokenSequence& tokens,
                                                     const std::vector<TokenSpan>& entity_spans,
                                                     const std::vector<std::string>& name_pool);

std::vector<std::string> load_name_pool(const std::string& path);

struct Question {
  std::string id;
  std::string text;
  std::vector<TokenSpan> entity_spans;  // token intervals after tokenization
};

struct BuildFailure {
  std::string id;
  std::string reason;  // lexical_gap | no_parse | conversion_error | ambiguous | bad_input
  std::string detail;
};

struct BuildOptions {
  bool strict_ambiguity = false;
  int jobs = 1;
  std::ostream* warn = nullptr;
};

struct BuildResult {
  struct Sentence {
    std::string id;
    DependencyTree tree;
  };
  std::vector<Sentence> sentences;  // successes, in input order
  std::vector<BuildFailure> failures;
  std::vector<std::string> ambiguous_ids;
};

// Tokenize + anonymize + parse + convert each question; failures are
// collected per question instead of aborting the batch. The pool names are
// merged into a copy of the lexicon as Name entries.
BuildResult build_corpus(const std::vector<Question>& questions, const Grammar& grammar,
                         const Lexicon& lexicon, const DepRuleSet& rules,
                         const std::vector<std::string>& name_pool,
                         const BuildOptions& options = {});

}  // namespace cfqdep
