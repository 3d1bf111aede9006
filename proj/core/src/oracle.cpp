#include "nlqc/oracle.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <json.hpp>
#include <numeric>

namespace nlqc {

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

long long to_int(std::string_view tok, std::size_t line) {
  long long v = 0;
  const auto* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, v);
  if (ec != std::errc{} || ptr != end) {
    throw ParseError(line, "expected integer, got '" + std::string(tok) + "'");
  }
  return v;
}

void check_vars(std::size_t n) {
  if (n < 1 || n > 30) throw std::invalid_argument("oracle: num_vars must be in [1, 30]");
}

}  // namespace

CnfFormula parse_dimacs(std::string_view text) {
  CnfFormula f;
  bool have_header = false;
  long long declared_clauses = 0;
  std::vector<int> current;
  std::size_t current_line = 0;
  std::size_t header_line = 0;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    auto toks = split_ws(line);
    if (toks.empty()) continue;
    if (toks[0] == "c") continue;
    if (toks[0][0] == 'c' && toks[0].size() > 1 && !std::isdigit(static_cast<unsigned char>(toks[0][1]))) continue;
    if (toks[0] == "%") break;
    if (toks[0] == "p") {
      if (have_header) throw ParseError(line_no, "duplicate 'p cnf' header");
      if (toks.size() != 4 || toks[1] != "cnf") throw ParseError(line_no, "malformed header, expected 'p cnf <vars> <clauses>'");
      const long long nv = to_int(toks[2], line_no);
      declared_clauses = to_int(toks[3], line_no);
      if (nv < 1 || nv > 30) throw ParseError(line_no, "variable count must be in [1, 30]");
      if (declared_clauses < 0) throw ParseError(line_no, "negative clause count");
      f.num_vars = static_cast<std::size_t>(nv);
      have_header = true;
      header_line = line_no;
      continue;
    }
    if (!have_header) throw ParseError(line_no, "clause before 'p cnf' header");
    for (auto tok : toks) {
      const long long lit = to_int(tok, line_no);
      if (lit == 0) {
        if (current.empty()) throw ParseError(line_no, "empty clause");
        f.clauses.push_back(std::move(current));
        current.clear();
        continue;
      }
      if (static_cast<std::size_t>(lit < 0 ? -lit : lit) > f.num_vars) {
        throw ParseError(line_no, "literal " + std::to_string(lit) + " out of range (num_vars = " +
                                      std::to_string(f.num_vars) + ")");
      }
      if (current.empty()) current_line = line_no;
      current.push_back(static_cast<int>(lit));
    }
  }
  if (!have_header) throw ParseError(line_no, "missing 'p cnf' header");
  if (!current.empty()) throw ParseError(current_line, "unterminated clause (missing trailing 0)");
  if (static_cast<long long>(f.clauses.size()) != declared_clauses) {
    throw ParseError(header_line, "header declares " + std::to_string(declared_clauses) + " clauses, found " +
                                  std::to_string(f.clauses.size()));
  }
  return f;
}

TruthTableOracle parse_truth_table(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(1, std::string("truth table: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("num_vars") || !doc.contains("solutions")) {
    throw ParseError(1, "truth table: expected object with 'num_vars' and 'solutions'");
  }
  if (!doc["num_vars"].is_number_unsigned()) throw ParseError(1, "truth table: num_vars must be a non-negative integer");
  TruthTableOracle t;
  t.num_vars = doc["num_vars"].get<std::size_t>();
  if (t.num_vars < 1 || t.num_vars > 30) throw ParseError(1, "truth table: num_vars must be in [1, 30]");
  if (!doc["solutions"].is_array()) throw ParseError(1, "truth table: solutions must be an array");
  const std::uint64_t dim = std::uint64_t{1} << t.num_vars;
  for (const auto& v : doc["solutions"]) {
    if (!v.is_number_unsigned()) throw ParseError(1, "truth table: solutions must be non-negative integers");
    const auto s = v.get<std::uint64_t>();
    if (s >= dim) throw ParseError(1, "truth table: solution " + std::to_string(s) + " out of range");
    t.solutions.push_back(s);
  }
  std::sort(t.solutions.begin(), t.solutions.end());
  if (std::adjacent_find(t.solutions.begin(), t.solutions.end()) != t.solutions.end()) {
    throw ParseError(1, "truth table: duplicate solution");
  }
  return t;
}

std::string truth_table_to_json(const TruthTableOracle& t) {
  nlohmann::json doc;
  doc["num_vars"] = t.num_vars;
  doc["solutions"] = t.solutions;
  return doc.dump();
}

OracleSpec::OracleSpec(CnfFormula f) : spec_(std::move(f)) {
  const auto& c = std::get<CnfFormula>(spec_);
  check_vars(c.num_vars);
  for (const auto& clause : c.clauses) {
    if (clause.empty()) throw std::invalid_argument("oracle: empty clause");
    for (int lit : clause) {
      if (lit == 0 || static_cast<std::size_t>(std::abs(lit)) > c.num_vars) {
        throw std::invalid_argument("oracle: literal out of range");
      }
    }
  }
}

OracleSpec::OracleSpec(TruthTableOracle t) : spec_(std::move(t)) {
  auto& tt = std::get<TruthTableOracle>(spec_);
  check_vars(tt.num_vars);
  std::sort(tt.solutions.begin(), tt.solutions.end());
  tt.solutions.erase(std::unique(tt.solutions.begin(), tt.solutions.end()), tt.solutions.end());
  if (!tt.solutions.empty() && tt.solutions.back() >= (std::uint64_t{1} << tt.num_vars)) {
    throw std::invalid_argument("oracle: solution out of range");
  }
}

std::size_t OracleSpec::num_vars() const {
  return std::visit([](const auto& s) { return s.num_vars; }, spec_);
}

bool OracleSpec::evaluate(std::uint64_t i) const {
  const std::size_t n = num_vars();
  if (i >= (std::uint64_t{1} << n)) {
    throw std::out_of_range("evaluate: input " + std::to_string(i) + " out of range");
  }
  if (const auto* t = std::get_if<TruthTableOracle>(&spec_)) {
    return std::binary_search(t->solutions.begin(), t->solutions.end(), i);
  }
  const auto& f = std::get<CnfFormula>(spec_);
  for (const auto& clause : f.clauses) {
    bool sat = false;
    for (int lit : clause) {
      const auto var = static_cast<std::size_t>(std::abs(lit));
      const bool value = (i >> (n - var)) & 1;
      if (value == (lit > 0)) {
        sat = true;
        break;
      }
    }
    if (!sat) return false;
  }
  return true;
}

void OracleSpec::apply(StateVector& state, std::span<const QubitIndex> inputs, QubitIndex flag) {
  if (inputs.size() != num_vars()) {
    throw std::invalid_argument("apply_oracle: expected " + std::to_string(num_vars()) + " input qubits");
  }
  std::vector<QubitIndex> all(inputs.begin(), inputs.end());
  all.push_back(flag);
  for (std::size_t a = 0; a < all.size(); ++a) {
    if (all[a].value >= state.num_qubits()) throw std::out_of_range("apply_oracle: qubit out of range");
    for (std::size_t b = a + 1; b < all.size(); ++b) {
      if (all[a] == all[b]) throw std::invalid_argument("apply_oracle: qubit indices collide");
    }
  }
  const std::size_t nq = state.num_qubits();
  std::vector<Amplitude> amps(state.amplitudes().begin(), state.amplitudes().end());
  const std::size_t flag_bit = nq - 1 - flag.value;
  for (std::uint64_t idx = 0; idx < amps.size(); ++idx) {
    if ((idx >> flag_bit) & 1) continue;
    std::uint64_t i = 0;
    for (const auto& q : inputs) i = (i << 1) | ((idx >> (nq - 1 - q.value)) & 1);
    if (evaluate(i)) std::swap(amps[idx], amps[idx | (std::uint64_t{1} << flag_bit)]);
  }
  state = StateVector::from_amplitudes(std::move(amps));
  ++calls_;
}

std::vector<std::uint64_t> solutions_bruteforce(const OracleSpec& oracle) {
  const std::size_t n = oracle.num_vars();
  if (n > kMaxBruteforceVars) {
    throw std::invalid_argument("count_solutions_bruteforce: more than " +
                                std::to_string(kMaxBruteforceVars) + " variables");
  }
  std::vector<std::uint64_t> out;
  for (std::uint64_t i = 0; i < (std::uint64_t{1} << n); ++i) {
    if (oracle.evaluate(i)) out.push_back(i);
  }
  return out;
}

std::uint64_t count_solutions_bruteforce(const OracleSpec& oracle) {
  return solutions_bruteforce(oracle).size();
}

TruthTableOracle random_oracle(std::size_t num_vars, std::uint64_t s, RandomSource& rng) {
  check_vars(num_vars);
  if (num_vars > kMaxBruteforceVars) throw std::invalid_argument("random_oracle: too many variables");
  const std::uint64_t dim = std::uint64_t{1} << num_vars;
  if (s > dim) throw std::invalid_argument("random_oracle: s exceeds 2^num_vars");
  std::vector<std::uint64_t> pool(dim);
  std::iota(pool.begin(), pool.end(), std::uint64_t{0});
  for (std::uint64_t k = 0; k < s; ++k) {
    const std::uint64_t j = k + rng.uniform_int(dim - k);
    std::swap(pool[k], pool[j]);
  }
  TruthTableOracle t{num_vars, {pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(s)}};
  std::sort(t.solutions.begin(), t.solutions.end());
  return t;
}

}  // namespace nlqc
