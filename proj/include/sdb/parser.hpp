#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "sdb/ast.hpp"

namespace sdb {

/// Parses a declaration file (schemas, instances, queries, judgements).
/// Comments run from '#' to end of line. Throws SyntaxError with a position
/// on malformed input; never crashes. No name resolution happens here.
std::vector<ast::Declaration> parse(std::string_view text);

/// Parses a single judgement declaration, e.g. the output of
/// ast::print_judgement. Inverse to printing.
ast::Judgement parse_judgement(std::string_view text);

/// True when the token is usable as a user-declared name (an identifier that
/// is neither a keyword nor of the face-map shape dNN).
bool is_valid_name(std::string_view token);

}  // namespace sdb
