#pragma once

// Abstract syntax of the imperative source language: expressions over
// program variables and commands with input/output channels and
// declassification.

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace wherecheck {

using Value = std::uint32_t;

enum class BinOp { add, sub, mul, eq, ne, lt, le, bit_and, bit_or };

const char* to_string(BinOp op);

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { constant, variable, binary };

  Kind kind = Kind::constant;
  Value value = 0;       // constant
  std::string name;      // variable
  int index = -1;        // variable slot, resolved by Program
  BinOp op = BinOp::add; // binary
  ExprPtr lhs, rhs;

  static ExprPtr constant(Value v);
  static ExprPtr variable(std::string name, int index = -1);
  static ExprPtr binary(BinOp op, ExprPtr lhs, ExprPtr rhs);
};

struct Command;
using CommandPtr = std::shared_ptr<const Command>;

enum class SiteKind { plain, declass, input, output };

const char* to_string(SiteKind kind);

struct Command {
  enum class Kind { skip, assign, declass, if_then_else, while_do, seq, input, output };

  Kind kind = Kind::skip;
  int site = -1;          // -1 for seq, which has no site of its own
  std::string target;     // assign, declass, input
  int target_index = -1;
  std::string channel;    // input, output
  int channel_index = -1;
  ExprPtr expr;           // rhs, condition, or output value
  CommandPtr first;       // then-branch, loop body, left of seq
  CommandPtr second;      // else-branch, right of seq

  static CommandPtr skip();
  static CommandPtr assign(std::string target, ExprPtr e);
  static CommandPtr declass(std::string target, ExprPtr e);
  static CommandPtr if_then_else(ExprPtr cond, CommandPtr then_branch, CommandPtr else_branch);
  static CommandPtr while_do(ExprPtr cond, CommandPtr body);
  static CommandPtr seq(CommandPtr first, CommandPtr second);
  static CommandPtr input(std::string target, std::string channel);
  static CommandPtr output(ExprPtr e, std::string channel);
};

struct SiteLabel {
  int id = 0;
  SiteKind kind = SiteKind::plain;
  std::string channel; // input/output sites only
  const Command* command = nullptr;
};

// A parsed program. Construction clones the tree, numbering every non-seq
// command in preorder and resolving variable and channel names to slots
// (sorted by name).
class Program {
public:
  Program() : Program(Command::skip()) {}
  explicit Program(const CommandPtr& root);

  const Command& root() const { return *root_; }
  const CommandPtr& root_ptr() const { return root_; }
  const std::vector<SiteLabel>& sites() const { return sites_; }
  const std::vector<std::string>& variables() const { return variables_; }
  const std::vector<std::string>& channels() const { return channels_; }

  int variable_index(const std::string& name) const;
  int channel_index(const std::string& name) const;

private:
  CommandPtr root_;
  std::vector<SiteLabel> sites_;
  std::vector<std::string> variables_;
  std::vector<std::string> channels_;
};

bool same_expr(const Expr& a, const Expr& b);
bool same_command(const Command& a, const Command& b);

std::string pretty_print(const Expr& e);
std::string pretty_print(const Command& c);

// Variables read by an expression, in first-occurrence order, deduplicated.
std::vector<std::string> expr_variables(const Expr& e);

} // namespace wherecheck
