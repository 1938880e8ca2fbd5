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

#include "cpp_scan.h"
#include "fuzztune/common/errors.h"
#include "fuzztune/repair/repair.h"

namespace fuzztune::repair {
namespace {

using internal::CodeMask;
using internal::Identifiers;
using internal::OffsetOf;

constexpr std::string_view kUmbrella =
    "// fuzztune umbrella v1\n"
    "#include <cstdio>\n"
    "#include <cstdlib>\n"
    "#include <cstring>\n"
    "#include <cmath>\n"
    "#include <cctype>\n"
    "#include <climits>\n"
    "#include <ctime>\n"
    "#include <iostream>\n"
    "#include <iomanip>\n"
    "#include <sstream>\n"
    "#include <string>\n"
    "#include <vector>\n"
    "#include <algorithm>\n"
    "#include <map>\n"
    "#include <set>\n"
    "#include <queue>\n"
    "#include <stack>\n"
    "#include <deque>\n"
    "#include <list>\n"
    "#include <utility>\n"
    "#include <numeric>\n"
    "#include <functional>\n"
    "#include <bitset>\n"
    "using namespace std;\n";

bool IsSpace(char c) { return std::isspace(static_cast<unsigned char>(c)); }

std::string Noop(std::string_view source, RepairAction* action,
                 std::string why) {
  if (action) {
    action->noop = true;
    action->description = std::move(why);
  }
  return std::string(source);
}

void Describe(RepairAction* action, std::string what) {
  if (action) {
    action->noop = false;
    action->description = std::move(what);
  }
}

std::string FixMissingHeader(std::string_view source, RepairAction* action) {
  if (source.find(kUmbrellaMarker) != std::string_view::npos) {
    return Noop(source, action, "umbrella block already present");
  }
  Describe(action, "prepended umbrella header block");
  std::string out(kUmbrella);
  out.append(source);
  return out;
}

// The statement ending at the last ';' before `close` starts with "return".
bool EndsWithReturn(std::string_view src, const std::vector<bool>& mask,
                    size_t open, size_t close) {
  size_t p = close;
  while (p > open + 1 && (!mask[p - 1] || IsSpace(src[p - 1]))) --p;
  if (p <= open + 1 || src[p - 1] != ';') return false;
  size_t end = p - 1;
  size_t b = end;
  while (b > open + 1) {
    char c = src[b - 1];
    if (mask[b - 1] && (c == ';' || c == '{' || c == '}')) break;
    --b;
  }
  while (b < end && (!mask[b] || IsSpace(src[b]))) ++b;
  std::string_view stmt = src.substr(b, end - b);
  return stmt.substr(0, 6) == "return" &&
         (stmt.size() == 6 || !internal::IsIdentChar(stmt[6]));
}

std::string FixMissingReturn(std::string_view source, RepairAction* action) {
  std::string src(source);
  auto mask = CodeMask(src);
  auto m = internal::FindMain(src, mask);
  if (!m) return Noop(source, action, "no definition of main found");
  std::vector<std::string> steps;

  // Edits run back to front so earlier offsets stay valid.
  if (!EndsWithReturn(src, mask, m->body_open, m->body_close)) {
    src.insert(m->body_close, "return 0;");
    steps.push_back("appended return 0");
  }
  for (size_t p = m->body_close; p > m->body_open;) {
    --p;
    if (!mask[p] || src.compare(p, 6, "return") != 0) continue;
    if (p > 0 && internal::IsIdentChar(src[p - 1])) continue;
    size_t q = p + 6;
    while (q < m->body_close && IsSpace(src[q])) ++q;
    if (q < m->body_close && src[q] == ';') {
      src.replace(p, q - p, "return 0");
      steps.push_back("bare return became return 0");
    }
  }
  if (!m->return_type) {
    src.insert(m->name_offset, "int ");
    steps.push_back("declared main as int");
  } else {
    std::string_view type(src.data() + m->return_type->offset, m->return_type->length);
    if (type == "void") {
      src.replace(m->return_type->offset, m->return_type->length, "int");
      steps.push_back("changed main's return type to int");
    }
  }
  if (steps.empty()) return Noop(source, action, "main already returns int");
  std::string what;
  for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
    if (!what.empty()) what += "; ";
    what += *it;
  }
  Describe(action, what);
  return src;
}

std::string FixStructSemicolon(std::string_view source, const Diagnostic& diag,
                               RepairAction* action) {
  auto off = OffsetOf(source, *diag.location);
  if (!off) return Noop(source, action, "location outside the source");
  size_t p = *off;
  while (p < source.size() && internal::IsIdentChar(source[p])) ++p;
  if (p < source.size() && source[p] == ';') {
    return Noop(source, action, "semicolon already present");
  }
  auto mask = CodeMask(source);
  while (p > 0 && (IsSpace(source[p - 1]) || !mask[p - 1])) --p;
  if (p == 0) return Noop(source, action, "no token before the location");
  if (source[p - 1] == ';') return Noop(source, action, "semicolon already present");
  std::string out(source);
  out.insert(p, ";");
  Describe(action, "inserted ';' after '" + std::string(1, source[p - 1]) + "'");
  return out;
}

std::string FixRename(std::string_view source, const Diagnostic& diag,
                      RepairAction* action) {
  if (!diag.symbol || diag.symbol->empty()) {
    return Noop(source, action, "no symbol to rename");
  }
  const std::string& sym = *diag.symbol;
  auto mask = CodeMask(source);
  auto idents = Identifiers(source, mask);
  std::string out(source);
  size_t renamed = 0;
  for (auto it = idents.rbegin(); it != idents.rend(); ++it) {
    if (it->qualified || it->in_include ||
        source.substr(it->offset, it->length) != sym) {
      continue;
    }
    out.insert(it->offset, "fixed_");
    ++renamed;
  }
  if (renamed == 0) return Noop(source, action, "no occurrences of '" + sym + "'");
  Describe(action, "renamed " + std::to_string(renamed) + " occurrences of '" +
                       sym + "' to 'fixed_" + sym + "'");
  return out;
}

bool SixtyFourBitContext(std::string_view source, const std::string& sym) {
  static const std::regex kWide(R"(long\s+long|int64|%lld|%I64d|\b\d+[lL][lL]\b)");
  std::regex use(R"(\b)" + sym + R"(\b)");
  size_t pos = 0;
  while (pos < source.size()) {
    size_t nl = source.find('\n', pos);
    if (nl == std::string_view::npos) nl = source.size();
    std::string line(source.substr(pos, nl - pos));
    pos = nl + 1;
    if (std::regex_search(line, use) && std::regex_search(line, kWide)) return true;
  }
  return false;
}

std::string FixUndeclared(std::string_view source, const Diagnostic& diag,
                          const RepairOptions& options, RepairAction* action) {
  if (!diag.symbol || diag.symbol->empty()) {
    return Noop(source, action, "no symbol to define");
  }
  const std::string& sym = *diag.symbol;
  std::string src(source);
  std::regex defined(R"(\bconst\s+(int|long\s+long)\s+)" + sym + R"(\s*=)");
  if (std::regex_search(src, defined)) {
    return Noop(source, action, "'" + sym + "' already defined");
  }
  auto mask = CodeMask(source);
  std::optional<size_t> first;
  for (const auto& id : Identifiers(source, mask)) {
    if (!id.qualified && !id.preprocessor &&
        source.substr(id.offset, id.length) == sym) {
      first = id.offset;
      break;
    }
  }
  if (!first) return Noop(source, action, "no use of '" + sym + "' found");

  // After the last top-level terminator (';', '}' or a preprocessor line)
  // preceding the first use.
  size_t insert_at = 0;
  bool after_line = true;
  int depth = 0;
  bool line_start = true;
  bool directive = false;
  for (size_t i = 0; i < *first; ++i) {
    char c = source[i];
    if (c == '\n') {
      if (directive && !(i > 0 && source[i - 1] == '\\')) {
        directive = false;
        if (depth == 0) {
          insert_at = i + 1;
          after_line = true;
        }
      }
      line_start = true;
      continue;
    }
    if (!mask[i]) continue;
    if (line_start && c == '#') directive = true;
    if (!IsSpace(c)) line_start = false;
    if (directive) continue;
    if (c == '{' || c == '(' || c == '[') ++depth;
    if (c == '}' || c == ')' || c == ']') --depth;
    if (depth == 0 && (c == ';' || c == '}')) {
      insert_at = i + 1;
      after_line = false;
    }
  }
  const bool wide = SixtyFourBitContext(source, sym);
  std::string decl = std::string(wide ? "const long long " : "const int ") +
                     sym + " = " + std::to_string(options.constant_value) + ";";
  std::string text;
  if (after_line) {
    text = decl + "\n";
  } else if (insert_at < src.size() && src[insert_at] == '\n') {
    text = "\n" + decl;
  } else {
    text = "\n" + decl + "\n";
  }
  src.insert(insert_at, text);
  Describe(action, "defined " + decl);
  return src;
}

}  // namespace

std::string_view UmbrellaBlock() { return kUmbrella; }

std::string ApplyFix(std::string_view source, const Diagnostic& diag,
                     const RepairOptions& options, RepairAction* action) {
  if (diag.kind == DiagKind::kOther) {
    throw PreconditionError("cannot apply a fix for an unclassified diagnostic");
  }
  if (action) {
    action->kind = diag.kind;
    action->location = diag.location.value_or(Location{});
  }
  if (!diag.location) return Noop(source, action, "diagnostic has no location");
  switch (diag.kind) {
    case DiagKind::kMissingHeader:
      return FixMissingHeader(source, action);
    case DiagKind::kMissingReturn:
      return FixMissingReturn(source, action);
    case DiagKind::kReservedKeywordMisuse:
      return FixRename(source, diag, action);
    case DiagKind::kStructMissingSemicolon:
      return FixStructSemicolon(source, diag, action);
    case DiagKind::kUndeclaredIdentifier:
      return FixUndeclared(source, diag, options, action);
    case DiagKind::kOther:
      break;
  }
  return std::string(source);
}

}  // namespace fuzztune::repair
