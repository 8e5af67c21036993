#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "wmtsq/games.hpp"
#include "wmtsq/model.hpp"

namespace wmtsq {

class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(std::string file, int line, const std::string& what)
      : std::runtime_error(file + ":" + std::to_string(line) + ": " + what),
        file(std::move(file)),
        line(line) {}
  std::string file;
  int line;
};

enum class FileFormat { kText, kStructured };

/// Line-oriented text format:
///   wmts | impl
///   states: s0 s1 ...
///   initial: s0
///   may  SRC ACTION [LO,HI] DST     (wmts)
///   must SRC ACTION [LO,HI] DST     (wmts)
///   SRC ACTION W DST                (impl)
/// '#' starts a comment; bounds may be -inf/inf.
Wmts parse_wmts_text(std::string_view text, std::string_view filename = "<text>");

/// Canonical writer: sorted states and transitions; emits the impl dialect
/// when the system is an implementation. write(parse(write(x))) == write(x).
std::string write_wmts_text(const Wmts& s);

/// Structured object form: { "states": [...], "initial": ...,
/// "may": [{src,action,lo,hi,dst}...], "must": [...] }.
Wmts parse_wmts_json(std::string_view text, std::string_view filename = "<json>");
std::string write_wmts_json(const Wmts& s);

/// Bipartite game as structured data: both vertex lists, weighted edges,
/// start vertex. Escape edges carry the weight "inf".
std::string write_game_json(const GameGraph& g);

/// Reads a system from disk, sniffing the format (a leading '{' selects the
/// structured form). With auto_may, inserts a covering may transition for
/// each uncovered must before validation. Throws SyntaxError on parse
/// failure and std::invalid_argument when validation fails.
Wmts load_wmts(const std::string& path, bool auto_may = false);

/// Same, but without the validation step; used by the validate command.
Wmts load_wmts_raw(const std::string& path, bool auto_may = false);

std::string write_wmts(const Wmts& s, FileFormat format);

}  // namespace wmtsq
