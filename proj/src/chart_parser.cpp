#include <algorithm>
#include <iostream>
#include <map>
#include <ostream>
#include <set>
#include <tuple>

#include "cfqdep/errors.hpp"
#include "cfqdep/grammar.hpp"
#include "cfqdep/strings.hpp"

// Earley recognizer over the general CFG (handles the grammar's direct left
// recursion and unary chains; RHS length is unbounded). Backpointers record
// every way an item was advanced, so the chart doubles as a packed forest
// from which all parses are unpacked afterwards.

namespace cfqdep {

namespace {

struct Item {
  int rule;
  int dot;
  int origin;
  bool operator<(const Item& o) const {
    return std::tie(rule, dot, origin) < std::tie(o.rule, o.dot, o.origin);
  }
};

// How an item with dot > 0 was reached: from `prev` (same rule, dot-1) by
// consuming either a leaf (scan) or a completed nonterminal (complete).
struct Cause {
  int prev_set;
  int prev_item;
  bool is_leaf;
  // scan:
  int token_index = -1;
  std::string leaf_label;
  // complete:
  std::string symbol;
  int child_begin = -1, child_end = -1;
};

struct ItemEntry {
  Item item;
  std::vector<Cause> causes;
};

struct Chart {
  // state_sets[j]: items ending at position j.
  std::vector<std::vector<ItemEntry>> state_sets;
  std::vector<std::map<Item, int>> index;
  // For forest unpacking: completed items per (symbol, begin, end).
  std::map<std::tuple<std::string, int, int>, std::vector<std::pair<int, int>>> completed;
};

class Parser {
 public:
  Parser(const TokenSequence& tokens, const Grammar& grammar, const Lexicon& lexicon)
      : tokens_(tokens), grammar_(grammar), lexicon_(lexicon) {}

  std::vector<ConstituencyTree> run();

 private:
  int add_item(int set, const Item& item, const Cause* cause);
  void predict(int set, const std::string& symbol);
  void complete(int set, int item_idx);
  void scan(int set, int item_idx);
  void process(int set);

  std::vector<TreeNode> trees_for(const std::string& symbol, int begin, int end);
  std::vector<std::vector<TreeNode>> expand(int set, int item_idx);

  const TokenSequence& tokens_;
  const Grammar& grammar_;
  const Lexicon& lexicon_;
  Chart chart_;
  std::vector<std::set<std::string>> predicted_;  // per set: symbols already predicted
  std::set<std::tuple<std::string, int, int>> announced_;
  std::map<std::tuple<std::string, int, int>, std::vector<TreeNode>> tree_memo_;
  std::map<std::pair<int, int>, std::vector<std::vector<TreeNode>>> expand_memo_;
};

int Parser::add_item(int set, const Item& item, const Cause* cause) {
  auto& idx = chart_.index[set];
  auto it = idx.find(item);
  int pos;
  if (it == idx.end()) {
    pos = static_cast<int>(chart_.state_sets[set].size());
    idx.emplace(item, pos);
    chart_.state_sets[set].push_back({item, {}});
    const Production& p = grammar_.production(item.rule);
    if (item.dot == static_cast<int>(p.rhs.size()))
      chart_.completed[{p.lhs, item.origin, set}].push_back({set, pos});
  } else {
    pos = it->second;
  }
  if (cause) chart_.state_sets[set][pos].causes.push_back(*cause);
  return pos;
}

void Parser::predict(int set, const std::string& symbol) {
  if (!predicted_[set].insert(symbol).second) return;
  if (const auto* rules = grammar_.productions_for(symbol))
    for (int r : *rules) add_item(set, Item{r, 0, set}, nullptr);
}

void Parser::scan(int set, int item_idx) {
  const Item item = chart_.state_sets[set][item_idx].item;
  const Production& p = grammar_.production(item.rule);
  if (item.dot >= static_cast<int>(p.rhs.size())) return;
  if (set >= static_cast<int>(tokens_.tokens.size())) return;
  const std::string& sym = p.rhs[item.dot];
  const std::string& tok = tokens_.tokens[set];

  bool matches = false;
  if (p.literal[item.dot]) {
    matches = (tok == sym);
  } else if (grammar_.is_preterminal(sym)) {
    if (const auto* cats = lexicon_.categories(tok))
      matches = std::binary_search(cats->begin(), cats->end(), sym);
  }
  if (!matches) return;

  Cause cause;
  cause.prev_set = set;
  cause.prev_item = item_idx;
  cause.is_leaf = true;
  cause.token_index = set;
  cause.leaf_label = sym;
  add_item(set + 1, Item{item.rule, item.dot + 1, item.origin}, &cause);
}

void Parser::complete(int set, int item_idx) {
  const Item item = chart_.state_sets[set][item_idx].item;
  const Production& p = grammar_.production(item.rule);
  if (item.dot != static_cast<int>(p.rhs.size())) return;
  const std::string& lhs = p.lhs;
  // Advance every item in the origin set waiting on lhs. The waiting set can
  // grow while we iterate (same-set completions of unary rules), so index by
  // position.
  auto& origin_items = chart_.state_sets[item.origin];
  for (size_t i = 0; i < origin_items.size(); ++i) {
    const Item waiting = origin_items[i].item;
    const Production& wp = grammar_.production(waiting.rule);
    if (waiting.dot >= static_cast<int>(wp.rhs.size())) continue;
    if (wp.literal[waiting.dot] || wp.rhs[waiting.dot] != lhs) continue;
    Cause cause;
    cause.prev_set = item.origin;
    cause.prev_item = static_cast<int>(i);
    cause.is_leaf = false;
    cause.symbol = lhs;
    cause.child_begin = item.origin;
    cause.child_end = set;
    add_item(set, Item{waiting.rule, waiting.dot + 1, waiting.origin}, &cause);
  }
}

void Parser::process(int set) {
  auto& items = chart_.state_sets[set];
  for (size_t i = 0; i < items.size(); ++i) {
    const Item item = items[i].item;
    const Production& p = grammar_.production(item.rule);
    if (item.dot == static_cast<int>(p.rhs.size())) {
      // Announce each passive (symbol, begin, end) node once. Later completed
      // items for the same node would advance the same waiters with identical
      // causes and duplicate every unpacked parse; their derivations are still
      // reached via chart_.completed.
      if (announced_.insert({p.lhs, item.origin, set}).second)
        complete(set, static_cast<int>(i));
    } else {
      const std::string& sym = p.rhs[item.dot];
      if (!p.literal[item.dot] && grammar_.is_nonterminal(sym)) predict(set, sym);
      scan(set, static_cast<int>(i));
    }
  }
}

std::vector<std::vector<TreeNode>> Parser::expand(int set, int item_idx) {
  auto key = std::make_pair(set, item_idx);
  auto memo = expand_memo_.find(key);
  if (memo != expand_memo_.end()) return memo->second;

  const ItemEntry& entry = chart_.state_sets[set][item_idx];
  std::vector<std::vector<TreeNode>> result;
  if (entry.item.dot == 0) {
    result.push_back({});
  } else {
    for (const Cause& cause : entry.causes) {
      auto prefixes = expand(cause.prev_set, cause.prev_item);
      std::vector<TreeNode> subtrees;
      if (cause.is_leaf) {
        TreeNode leaf;
        leaf.label = cause.leaf_label;
        leaf.token_index = cause.token_index;
        leaf.begin = cause.token_index;
        leaf.end = cause.token_index + 1;
        subtrees.push_back(std::move(leaf));
      } else {
        subtrees = trees_for(cause.symbol, cause.child_begin, cause.child_end);
      }
      for (const auto& prefix : prefixes)
        for (const auto& sub : subtrees) {
          auto children = prefix;
          children.push_back(sub);
          result.push_back(std::move(children));
        }
    }
  }
  expand_memo_[key] = result;
  return result;
}

std::vector<TreeNode> Parser::trees_for(const std::string& symbol, int begin, int end) {
  auto key = std::make_tuple(symbol, begin, end);
  auto memo = tree_memo_.find(key);
  if (memo != tree_memo_.end()) return memo->second;

  std::vector<TreeNode> result;
  auto it = chart_.completed.find(key);
  if (it != chart_.completed.end()) {
    for (auto [set, item_idx] : it->second) {
      const Item item = chart_.state_sets[set][item_idx].item;
      for (auto& children : expand(set, item_idx)) {
        TreeNode node;
        node.label = symbol;
        node.rule_index = item.rule;
        node.begin = begin;
        node.end = end;
        node.children = std::move(children);
        result.push_back(std::move(node));
      }
    }
  }
  tree_memo_[key] = result;
  return result;
}

void derivation_key_of(const TreeNode& node, const Grammar& grammar,
                       std::vector<std::string>& out) {
  if (node.is_leaf()) {
    out.push_back("tok:" + node.label);
    return;
  }
  out.push_back(grammar.production(node.rule_index).rule_id);
  for (const auto& child : node.children) derivation_key_of(child, grammar, out);
}

std::vector<ConstituencyTree> Parser::run() {
  const int n = static_cast<int>(tokens_.tokens.size());

  // Lexical-gap check up front: every token must have a category or match
  // some literal terminal.
  for (const auto& tok : tokens_.tokens)
    if (!lexicon_.categories(tok) && !grammar_.literal_terminals().count(tok))
      throw DataError("token not in lexicon: `" + tok + "`" +
                      (tokens_.source_id.empty() ? "" : " (" + tokens_.source_id + ")"));

  chart_.state_sets.resize(n + 1);
  chart_.index.resize(n + 1);
  predicted_.resize(n + 1);

  predict(0, grammar_.start_symbol());
  for (int j = 0; j <= n; ++j) process(j);

  std::vector<ConstituencyTree> parses;
  for (TreeNode& root : trees_for(grammar_.start_symbol(), 0, n)) {
    ConstituencyTree tree;
    tree.root = std::move(root);
    derivation_key_of(tree.root, grammar_, tree.derivation_key);
    parses.push_back(std::move(tree));
  }
  std::sort(parses.begin(), parses.end(), [](const ConstituencyTree& a, const ConstituencyTree& b) {
    return a.derivation_key < b.derivation_key;
  });
  return parses;
}

}  // namespace

std::vector<ConstituencyTree> parse(const TokenSequence& tokens, const Grammar& grammar,
                                    const Lexicon& lexicon) {
  return Parser(tokens, grammar, lexicon).run();
}

const ConstituencyTree& select_parse(const std::vector<ConstituencyTree>& parses, bool strict,
                                     const std::string& context_id, std::ostream* warn) {
  if (parses.empty())
    throw DataError("no parse" + (context_id.empty() ? "" : " for " + context_id));
  if (parses.size() > 1) {
    if (strict)
      throw DataError("ambiguous parse (" + std::to_string(parses.size()) + " candidates)" +
                      (context_id.empty() ? "" : " for " + context_id));
    if (warn)
      *warn << "warning: ambiguous parse (" << parses.size() << " candidates)"
            << (context_id.empty() ? "" : " for " + context_id) << "\n";
  }
  return parses.front();  // parse() sorts by derivation key
}

namespace {

void check_node(const TreeNode& node, const Grammar& grammar, const TokenSequence& tokens,
                std::vector<int>& frontier) {
  if (node.is_leaf()) {
    if (node.token_index < 0 || node.token_index >= static_cast<int>(tokens.tokens.size()))
      throw DataError("leaf token index out of range");
    if (node.begin != node.token_index || node.end != node.token_index + 1)
      throw DataError("leaf span does not match its token index");
    frontier.push_back(node.token_index);
    return;
  }
  const Production& p = grammar.production(node.rule_index);
  if (p.lhs != node.label) throw DataError("node label does not match production LHS");
  if (node.children.size() != p.rhs.size())
    throw DataError("child count does not match production arity: " + p.rule_id);
  int pos = node.begin;
  for (size_t i = 0; i < node.children.size(); ++i) {
    const TreeNode& child = node.children[i];
    if (child.label != p.rhs[i])
      throw DataError("child symbol mismatch in " + p.rule_id);
    if (child.begin != pos) throw DataError("sibling spans not adjacent in " + p.rule_id);
    pos = child.end;
    check_node(child, grammar, tokens, frontier);
  }
  if (pos != node.end) throw DataError("node span is not the union of child spans");
}

}  // namespace

void check_tree(const ConstituencyTree& tree, const Grammar& grammar,
                const TokenSequence& tokens) {
  if (tree.root.begin != 0 || tree.root.end != static_cast<int>(tokens.tokens.size()))
    throw DataError("root span does not cover the sentence");
  std::vector<int> frontier;
  check_node(tree.root, grammar, tokens, frontier);
  for (size_t i = 0; i < frontier.size(); ++i)
    if (frontier[i] != static_cast<int>(i))
      throw DataError("leaf frontier is not 0..n in order");
  if (frontier.size() != tokens.tokens.size())
    throw DataError("leaf count does not equal token count");
}

}  // namespace cfqdep
