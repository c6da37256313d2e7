#pragma once

#include <tcsp/formulas.hpp>
#include <tcsp/polymorphisms.hpp>
#include <tcsp/structure.hpp>

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tcsp {

// Text formats. All parsers throw ParseError (with line and column) on syntax
// errors and Error on semantic ones. `#` starts a comment everywhere.
//
// Signature:   (lt/2, p0/1)
//
// Structure:   structure S over (lt/2, p0/1)
//              domain 3
//              labels: "1" "2" "3"          (optional)
//              rel lt: (0,1) (0,2) (1,2)
//              rel p0: (0)
//
// Instance:    var x, y, z;                  (optional declaration)
//              lt(x,y); lt(y,z) & x != z; false
//
// Operation:   operation <arity> <domain size>
//              followed by the values in lexicographic argument order

std::string format_signature(const Signature& sig);
Signature parse_signature(std::string_view text);

struct NamedStructure {
    std::string name;
    Structure structure;
};

std::string format_structure(const Structure& s, std::string_view name = "S");
/// Several structures, separated by blank lines and named prefix0, prefix1, ...
std::string format_structures(std::span<const Structure> structures, std::string_view prefix = "sample");
std::vector<NamedStructure> parse_structures(std::string_view text);
/// Exactly one structure.
Structure parse_structure(std::string_view text);

std::string format_instance(const Instance& inst);
Instance parse_instance(std::string_view text, const Signature& sig);

std::string format_operation(const OperationTable& f);
OperationTable parse_operation(std::string_view text);

/// Whole file contents; throws Error when the file cannot be read.
std::string read_text_file(const std::filesystem::path& path);

} // namespace tcsp
