#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "nlqc/random.hpp"
#include "nlqc/statevector.hpp"

namespace nlqc {

struct CnfFormula {
  std::size_t num_vars = 0;
  std::vector<std::vector<int>> clauses;
};

// Sorted, duplicate-free set of satisfying inputs.
struct TruthTableOracle {
  std::size_t num_vars = 0;
  std::vector<std::uint64_t> solutions;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

CnfFormula parse_dimacs(std::string_view text);
// {"num_vars": n, "solutions": [i, ...]}
TruthTableOracle parse_truth_table(std::string_view text);
std::string truth_table_to_json(const TruthTableOracle& t);

class OracleSpec {
 public:
  explicit OracleSpec(CnfFormula f);
  explicit OracleSpec(TruthTableOracle t);

  std::size_t num_vars() const;
  // Classical evaluation; does not count as a query. Variable 1 is the most
  // significant bit of i.
  bool evaluate(std::uint64_t i) const;

  std::uint64_t call_counter() const { return calls_; }
  void reset_counter() { calls_ = 0; }

  // |i, b> -> |i, b xor f(i)>. inputs[0] carries the most significant bit.
  void apply(StateVector& state, std::span<const QubitIndex> inputs, QubitIndex flag);

  const std::variant<CnfFormula, TruthTableOracle>& variant() const { return spec_; }

 private:
  std::variant<CnfFormula, TruthTableOracle> spec_;
  std::uint64_t calls_ = 0;
};

inline constexpr std::size_t kMaxBruteforceVars = 24;

std::uint64_t count_solutions_bruteforce(const OracleSpec& oracle);
std::vector<std::uint64_t> solutions_bruteforce(const OracleSpec& oracle);

TruthTableOracle random_oracle(std::size_t num_vars, std::uint64_t s, RandomSource& rng);

}  // namespace nlqc
