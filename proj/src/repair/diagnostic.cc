// Copyright 2026 The FuzzTune Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <regex>
#include <set>

#include "cpp_scan.h"
#include "fuzztune/common/errors.h"
#include "fuzztune/repair/repair.h"

namespace fuzztune::repair {
namespace {

using internal::IdentifierAt;
using internal::OffsetOf;

// Names whose absence means a standard header is missing.
const std::set<std::string, std::less<>>& StdNames() {
  static const std::set<std::string, std::less<>> kNames = {
      "std", "printf", "scanf", "puts", "gets", "getchar", "putchar", "fgets",
      "fputs", "fprintf", "sprintf", "snprintf", "sscanf", "fopen", "fclose",
      "freopen", "fflush", "stdin", "stdout", "stderr", "EOF", "NULL",
      "size_t", "malloc", "calloc", "realloc", "free", "exit", "atoi", "atol",
      "atof", "abs", "labs", "llabs", "qsort", "rand", "srand", "system",
      "memset", "memcpy", "memcmp", "memmove", "strlen", "strcpy", "strncpy",
      "strcmp", "strncmp", "strcat", "strchr", "strrchr", "strstr", "strtok",
      "sqrt", "pow", "fabs", "floor", "ceil", "log", "log2", "log10", "exp",
      "sin", "cos", "tan", "asin", "acos", "atan", "atan2", "round", "fmod",
      "isdigit", "isalpha", "isspace", "isupper", "islower", "isalnum",
      "ispunct", "toupper", "tolower", "INT_MAX", "INT_MIN", "LLONG_MAX",
      "LLONG_MIN", "UINT_MAX", "LONG_MAX", "LONG_MIN", "CHAR_MAX", "time",
      "clock", "cin", "cout", "cerr", "endl", "setw", "setprecision",
      "setfill", "fixed", "getline", "string", "vector", "map", "set",
      "multiset", "multimap", "queue", "priority_queue", "stack", "deque",
      "list", "pair", "make_pair", "bitset", "stringstream", "istringstream",
      "ostringstream", "sort", "stable_sort", "min", "max", "swap", "reverse",
      "unique", "lower_bound", "upper_bound", "fill", "next_permutation",
      "prev_permutation", "accumulate", "greater", "less", "min_element",
      "max_element", "find", "count", "iota", "gcd", "ios", "numeric_limits",
  };
  return kNames;
}

// C++ keywords that are plain identifiers in C.
const std::set<std::string, std::less<>>& CppOnlyKeywords() {
  static const std::set<std::string, std::less<>> kWords = {
      "new", "delete", "class", "this", "template", "typename", "namespace",
      "operator", "private", "public", "protected", "friend", "virtual",
      "catch", "try", "throw", "and", "or", "not", "xor", "export", "mutable",
      "explicit", "using", "bool", "true", "false", "nullptr", "final",
      "override", "concept", "requires", "compl", "bitand", "bitor",
  };
  return kWords;
}

std::string StripSuffixes(std::string_view message) {
  std::string m(message);
  static const std::regex kFlag(R"( \[-[^\]]*\]$)");
  m = std::regex_replace(m, kFlag, "");
  auto did_you_mean = m.find("; did you mean");
  if (did_you_mean != std::string::npos) m.resize(did_you_mean);
  return m;
}

bool UmbrellaPresent(std::string_view source) {
  return source.find(kUmbrellaMarker) != std::string_view::npos;
}

// Next code byte after the identifier at `offset`.
char NextNonSpace(std::string_view src, size_t offset) {
  size_t p = offset;
  while (p < src.size() && internal::IsIdentChar(src[p])) ++p;
  while (p < src.size() && std::isspace(static_cast<unsigned char>(src[p]))) ++p;
  return p < src.size() ? src[p] : '\0';
}

// Offset of the first unqualified use of `sym`.
std::optional<size_t> FirstUse(std::string_view src, std::string_view sym) {
  auto mask = internal::CodeMask(src);
  for (const auto& id : internal::Identifiers(src, mask)) {
    if (!id.qualified && !id.preprocessor &&
        src.substr(id.offset, id.length) == sym) {
      return id.offset;
    }
  }
  return std::nullopt;
}

bool DeclaredAsVariable(std::string_view source, const std::string& word) {
  std::regex decl(
      R"((\b(int|long|short|char|double|float|unsigned|signed|bool)\s+|,\s*))" +
      word + R"(\s*(=|;|,|\[|\)))");
  std::string s(source);
  return std::regex_search(s, decl);
}

bool InsideMainBody(std::string_view source, std::optional<size_t> offset) {
  if (!offset) return false;
  auto mask = internal::CodeMask(source);
  auto m = internal::FindMain(source, mask);
  return m && *offset > m->body_open && *offset < m->body_close;
}

}  // namespace

std::string_view DiagKindName(DiagKind kind) {
  switch (kind) {
    case DiagKind::kMissingHeader: return "missing_header";
    case DiagKind::kMissingReturn: return "missing_return";
    case DiagKind::kReservedKeywordMisuse: return "reserved_keyword_misuse";
    case DiagKind::kStructMissingSemicolon: return "struct_missing_semicolon";
    case DiagKind::kUndeclaredIdentifier: return "undeclared_identifier";
    case DiagKind::kOther: return "other";
  }
  return "other";
}

DiagKind ParseDiagKind(std::string_view name) {
  for (DiagKind k : {DiagKind::kMissingHeader, DiagKind::kMissingReturn,
                     DiagKind::kReservedKeywordMisuse,
                     DiagKind::kStructMissingSemicolon,
                     DiagKind::kUndeclaredIdentifier, DiagKind::kOther}) {
    if (DiagKindName(k) == name) return k;
  }
  throw PreconditionError("unknown diagnostic kind '" + std::string(name) + "'");
}

Diagnostic Classify(std::string_view message, std::optional<Location> location,
                    std::string_view source) {
  Diagnostic d;
  d.raw_message = std::string(message);
  d.location = location;
  if (!location) return d;
  const std::string m = StripSuffixes(message);
  const std::optional<size_t> offset = OffsetOf(source, *location);
  const bool umbrella = UmbrellaPresent(source);
  std::smatch sm;

  auto classified = [&](DiagKind kind, std::optional<std::string> symbol) {
    d.kind = kind;
    d.symbol = std::move(symbol);
    return d;
  };

  // Undeclared names: either a missing header or a missing definition.
  static const std::regex kUndeclared(
      R"(^(?:use of undeclared identifier '(\w+)'|'(\w+)' was not declared in this scope)$)");
  if (std::regex_match(m, sm, kUndeclared)) {
    std::string sym = sm[1].matched ? sm[1].str() : sm[2].str();
    if (!umbrella && StdNames().count(sym)) {
      return classified(DiagKind::kMissingHeader, sym);
    }
    std::optional<size_t> at = offset;
    if (!at || IdentifierAt(source, *at) != sym) at = FirstUse(source, sym);
    if (!at || NextNonSpace(source, *at) == '(') return d;
    return classified(DiagKind::kUndeclaredIdentifier, sym);
  }
  static const std::regex kStdMember(
      R"(^(?:no (?:member|type|template) named '(\w+)' in namespace 'std'|'(\w+)' is not a member of 'std'|'(\w+)' in namespace 'std' does not name a (?:template )?type)$)");
  if (std::regex_match(m, sm, kStdMember)) {
    if (umbrella) return d;
    std::string sym = sm[1].matched ? sm[1].str() : sm[2].matched ? sm[2].str() : sm[3].str();
    return classified(DiagKind::kMissingHeader, sym);
  }
  static const std::regex kUnknownType(
      R"(^(?:unknown type name '(\w+)'|no template named '(\w+)'|'(\w+)' does not name a type|'(\w+)' is not a namespace-name|expected namespace name)$)");
  if (std::regex_match(m, sm, kUnknownType)) {
    std::string sym;
    for (int g = 1; g <= 4; ++g) {
      if (sm[g].matched) sym = sm[g].str();
    }
    if (sym.empty() && offset) sym = IdentifierAt(source, *offset).value_or("");
    if (!umbrella && StdNames().count(sym)) {
      return classified(DiagKind::kMissingHeader, sym);
    }
    return d;
  }

  // main declared with a wrong or missing return type, or returning nothing.
  static const std::regex kMainReturn(
      R"(^(?:'(?:::)?main' must return 'int'|non-void function 'main' should return a value|ISO C\+\+ forbids declaration of 'main' with no type)$)");
  if (std::regex_match(m, kMainReturn)) {
    return classified(DiagKind::kMissingReturn, "main");
  }
  if (m == "C++ requires a type specifier for all declarations" && offset &&
      IdentifierAt(source, *offset) == "main") {
    return classified(DiagKind::kMissingReturn, "main");
  }
  if ((m == "return-statement with no value, in function returning 'int'" ||
       m == "non-void function should return a value") &&
      InsideMainBody(source, offset)) {
    return classified(DiagKind::kMissingReturn, "main");
  }

  static const std::regex kStructSemi(
      R"(^expected ';' (?:after (?:struct|class|union)(?: definition)?|at end of (?:declaration list|member declaration))$)");
  if (std::regex_match(m, kStructSemi)) {
    return classified(DiagKind::kStructMissingSemicolon, std::nullopt);
  }

  // A user name colliding with a standard one.
  static const std::regex kCollision(
      R"(^(?:reference to '(\w+)' is ambiguous|redefinition of '(\w+)' as different kind of symbol|'(?:[^']*\s)?(\w+)' redeclared as different kind of (?:entity|symbol))$)");
  if (std::regex_match(m, sm, kCollision)) {
    std::string sym = sm[1].matched ? sm[1].str() : sm[2].matched ? sm[2].str() : sm[3].str();
    return classified(DiagKind::kReservedKeywordMisuse, sym);
  }
  // A C++ keyword used as a variable name.
  static const std::regex kBefore(R"(before '(\w+)'(?: token)?$)");
  std::optional<std::string> word;
  if (std::regex_search(m, sm, kBefore)) {
    word = sm[1].str();
  } else if (offset) {
    word = IdentifierAt(source, *offset);
  }
  if (word && CppOnlyKeywords().count(*word) && DeclaredAsVariable(source, *word)) {
    return classified(DiagKind::kReservedKeywordMisuse, *word);
  }
  return d;
}

std::vector<Diagnostic> ParseCompilerOutput(std::string_view output,
                                            std::string_view file_name,
                                            std::string_view source) {
  static const std::regex kLine(R"(^(.*?):(\d+):(\d+): (?:fatal )?error: (.*)$)");
  std::vector<Diagnostic> out;
  size_t pos = 0;
  while (pos < output.size()) {
    size_t nl = output.find('\n', pos);
    if (nl == std::string_view::npos) nl = output.size();
    std::string line(output.substr(pos, nl - pos));
    pos = nl + 1;
    std::smatch sm;
    if (!std::regex_match(line, sm, kLine)) continue;
    std::string path = sm[1].str();
    if (std::filesystem::path(path).filename() != std::filesystem::path(file_name).filename()) {
      continue;
    }
    Location loc{std::stoi(sm[2].str()), std::stoi(sm[3].str())};
    out.push_back(Classify(sm[4].str(), loc, source));
  }
  return out;
}

}  // namespace fuzztune::repair
