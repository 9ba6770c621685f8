#include "cfqdep/grammar.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "cfqdep/errors.hpp"
#include "cfqdep/strings.hpp"

namespace cfqdep {

namespace {

std::string strip_comment(const std::string& line) {
  auto pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

std::string make_rule_id(const std::string& lhs, const std::vector<std::string>& rhs,
                         const std::vector<bool>& literal) {
  std::string id = lhs + " ->";
  for (size_t i = 0; i < rhs.size(); ++i) {
    id += ' ';
    if (literal[i])
      id += '"' + rhs[i] + '"';
    else
      id += rhs[i];
  }
  return id;
}

}  // namespace

Grammar Grammar::load(std::istream& in, const std::string& source_name) {
  Grammar g;
  std::string line;
  int lineno = 0;
  std::set<std::string> seen_ids;
  while (std::getline(in, line)) {
    ++lineno;
    std::string body = trim(strip_comment(line));
    if (body.empty()) continue;
    auto fields = split_ws(body);
    if (fields[0] == "%preterm") {
      for (size_t i = 1; i < fields.size(); ++i) g.preterminals_.insert(fields[i]);
      continue;
    }
    if (fields.size() < 3 || fields[1] != "->")
      throw DataError(source_name + ":" + std::to_string(lineno) +
                      ": expected `LHS -> RHS...`, got: " + body);
    Production p;
    p.lhs = fields[0];
    for (size_t i = 2; i < fields.size(); ++i) {
      const std::string& sym = fields[i];
      if (sym.size() >= 2 && sym.front() == '"' && sym.back() == '"') {
        p.rhs.push_back(sym.substr(1, sym.size() - 2));
        p.literal.push_back(true);
        g.literals_.insert(p.rhs.back());
      } else {
        p.rhs.push_back(sym);
        p.literal.push_back(false);
      }
    }
    if (p.rhs.empty())
      throw DataError(source_name + ":" + std::to_string(lineno) + ": empty right-hand side");
    p.rule_id = make_rule_id(p.lhs, p.rhs, p.literal);
    if (!seen_ids.insert(p.rule_id).second)
      throw DataError(source_name + ":" + std::to_string(lineno) +
                      ": duplicate production: " + p.rule_id);
    p.index = static_cast<int>(g.productions_.size());
    g.by_lhs_[p.lhs].push_back(p.index);
    g.productions_.push_back(std::move(p));
  }

  if (g.by_lhs_.find(g.start_) == g.by_lhs_.end())
    throw DataError(source_name + ": no start symbol `" + g.start_ + "` defined");

  // Every non-literal RHS symbol must be derivable: an LHS somewhere or a
  // declared lexical category.
  for (const auto& p : g.productions_) {
    for (size_t i = 0; i < p.rhs.size(); ++i) {
      if (p.literal[i]) continue;
      const std::string& sym = p.rhs[i];
      if (!g.is_nonterminal(sym) && !g.is_preterminal(sym))
        throw DataError(source_name + ": undefined nonterminal `" + sym + "` in rule " +
                        p.rule_id);
    }
  }

  // Reject unary cycles (A -> B, B -> A): they admit infinitely many parses,
  // which the all-parses contract cannot return.
  std::map<std::string, std::vector<std::string>> unary;
  for (const auto& p : g.productions_)
    if (p.rhs.size() == 1 && !p.literal[0] && g.is_nonterminal(p.rhs[0]))
      unary[p.lhs].push_back(p.rhs[0]);
  std::map<std::string, int> state;  // 0 new, 1 in progress, 2 done
  std::vector<std::pair<std::string, size_t>> stack;
  for (const auto& [sym, _] : unary) {
    if (state[sym]) continue;
    stack.push_back({sym, 0});
    state[sym] = 1;
    while (!stack.empty()) {
      auto& [cur, next] = stack.back();
      auto it = unary.find(cur);
      if (it == unary.end() || next >= it->second.size()) {
        state[cur] = 2;
        stack.pop_back();
        continue;
      }
      const std::string& succ = it->second[next++];
      if (state[succ] == 1)
        throw DataError(source_name + ": unary cycle through `" + succ + "`");
      if (state[succ] == 0) {
        state[succ] = 1;
        stack.push_back({succ, 0});
      }
    }
  }

  return g;
}

Grammar Grammar::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open grammar file: " + path);
  return load(in, path);
}

const std::vector<int>* Grammar::productions_for(const std::string& lhs) const {
  auto it = by_lhs_.find(lhs);
  return it == by_lhs_.end() ? nullptr : &it->second;
}

const Production* Grammar::find_rule(const std::string& rule_id) const {
  for (const auto& p : productions_)
    if (p.rule_id == rule_id) return &p;
  return nullptr;
}

Lexicon Lexicon::load(std::istream& in, const std::string& source_name) {
  Lexicon lex;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw DataError(source_name + ":" + std::to_string(lineno) +
                      ": expected `token<TAB>category[,category...]`");
    std::string token = line.substr(0, tab);
    std::string cats = trim(line.substr(tab + 1));
    if (token.empty() || cats.empty())
      throw DataError(source_name + ":" + std::to_string(lineno) + ": empty token or category");
    for (const auto& cat : split_on(cats, ',')) {
      std::string c = trim(cat);
      if (c.empty())
        throw DataError(source_name + ":" + std::to_string(lineno) + ": empty category");
      lex.add(token, c);
    }
  }
  return lex;
}

Lexicon Lexicon::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open lexicon file: " + path);
  return load(in, path);
}

void Lexicon::add(const std::string& token, const std::string& category) {
  auto& cats = entries_[token];
  for (const auto& c : cats)
    if (c == category) return;
  cats.push_back(category);
  std::sort(cats.begin(), cats.end());
  category_names_.insert(category);
}

const std::vector<std::string>* Lexicon::categories(const std::string& token) const {
  auto it = entries_.find(token);
  return it == entries_.end() ? nullptr : &it->second;
}

TokenSequence tokenize(const std::string& question, const std::string& source_id) {
  TokenSequence seq;
  seq.source_id = source_id;
  for (const auto& chunk : split_ws(question)) {
    // Peel `?`, `,` and clitic `'s` off the right edge; everything else is
    // whitespace-delimited already.
    std::string core = chunk;
    std::vector<std::string> peeled;
    for (;;) {
      if (core.size() > 1 && (core.back() == '?' || core.back() == ',')) {
        peeled.emplace_back(1, core.back());
        core.pop_back();
      } else if (core.size() > 2 && ends_with(core, "'s")) {
        peeled.emplace_back("'s");
        core.resize(core.size() - 2);
      } else {
        break;
      }
    }
    if (!core.empty()) seq.tokens.push_back(core);
    for (auto it = peeled.rbegin(); it != peeled.rend(); ++it) seq.tokens.push_back(*it);
  }
  if (seq.tokens.empty()) throw DataError("empty question" + (source_id.empty() ? "" : " " + source_id));
  return seq;
}

}  // namespace cfqdep
