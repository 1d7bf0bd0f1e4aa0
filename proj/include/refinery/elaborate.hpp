#pragma once

#include <map>

#include "refinery/parser.hpp"
#include "refinery/refine.hpp"

namespace refinery::dsl {

struct ExecutedDirective {
  SurfaceDirective surface;
  std::string registered_as;  // refine directives: the derived code's name
};

/// Resolved module-level objects of one spec file. Refine directives execute
/// at elaboration time so derived codes are nameable by later declarations.
struct Module {
  std::map<std::string, DomainPtr> domains;
  std::map<std::string, CodePtr> codes;
  std::map<std::string, AlgebraSpec> algebras;  // total and partial
  std::map<std::string, ZygoPair> zygos;        // keyed by the gamma's name
  std::map<std::string, RefinedSpec> refined;
  std::map<std::string, RefinedIRSpec> refined_ir;
  std::vector<ExecutedDirective> directives;

  CodePtr find_code(const std::string& name) const;
};

struct ElabResult {
  Module module;
  ValidationReport errors;
  bool ok() const { return errors.ok(); }
};

/// Type checks every declaration, checks clause coverage and partial normal
/// form, and executes refine directives. Never throws on user errors; they
/// are collected with locations.
ElabResult elaborate(const SpecFile& file);

/// Convenience: parse + elaborate a file's text. Throws SyntaxError; semantic
/// errors come back in the report.
ElabResult elaborate_text(std::string_view text);

}  // namespace refinery::dsl
