#include "core/adl.hpp"

#include <cctype>
#include <limits>

#include "core/errors.hpp"
#include "core/text.hpp"

namespace capcheck {
namespace {

enum class Tok {
  kIdent,
  kNumber,
  kString,
  kLBrace,
  kRBrace,
  kLBracket,
  kRBracket,
  kSemi,
  kComma,
  kColon,
  kEquals,
  kArrow,     // ->
  kFatArrow,  // =>
  kEnd,
};

const char* tok_name(Tok t) {
  switch (t) {
    case Tok::kIdent: return "identifier";
    case Tok::kNumber: return "number";
    case Tok::kString: return "string";
    case Tok::kLBrace: return "'{'";
    case Tok::kRBrace: return "'}'";
    case Tok::kLBracket: return "'['";
    case Tok::kRBracket: return "']'";
    case Tok::kSemi: return "';'";
    case Tok::kComma: return "','";
    case Tok::kColon: return "':'";
    case Tok::kEquals: return "'='";
    case Tok::kArrow: return "'->'";
    case Tok::kFatArrow: return "'=>'";
    case Tok::kEnd: return "end of input";
  }
  return "?";
}

struct Token {
  Tok kind = Tok::kEnd;
  std::string text;
  double value = 0.0;
  int line = 1;
  int column = 1;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-';
}

class Lexer {
 public:
  Lexer(const std::string& text, std::string file)
      : text_(text), file_(std::move(file)) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_trivia();
      Token t = next_token();
      bool end = t.kind == Tok::kEnd;
      out.push_back(std::move(t));
      if (end) return out;
    }
  }

 private:
  [[noreturn]] void fail(const std::string& message) {
    throw ParseError({file_, line_, column_}, message);
  }

  char peek(size_t ahead = 0) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }

  char advance() {
    char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    return c;
  }

  void skip_trivia() {
    while (pos_ < text_.size()) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '#') {
        while (pos_ < text_.size() && peek() != '\n') advance();
      } else {
        return;
      }
    }
  }

  Token make(Tok kind, std::string text, int line, int column) {
    Token t;
    t.kind = kind;
    t.text = std::move(text);
    t.line = line;
    t.column = column;
    return t;
  }

  Token next_token() {
    if (pos_ >= text_.size()) return make(Tok::kEnd, "", line_, column_);
    int line = line_, column = column_;
    char c = peek();

    if (ident_start(c)) {
      std::string s;
      while (pos_ < text_.size() && ident_char(peek())) {
        // an identifier never swallows the '-' of a '->' arrow
        if (peek() == '-' && peek(1) == '>') break;
        s += advance();
      }
      return make(Tok::kIdent, std::move(s), line, column);
    }

    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.' ||
        (c == '-' && peek(1) != '>')) {
      return lex_number(line, column);
    }

    switch (c) {
      case '{': advance(); return make(Tok::kLBrace, "{", line, column);
      case '}': advance(); return make(Tok::kRBrace, "}", line, column);
      case '[': advance(); return make(Tok::kLBracket, "[", line, column);
      case ']': advance(); return make(Tok::kRBracket, "]", line, column);
      case ';': advance(); return make(Tok::kSemi, ";", line, column);
      case ',': advance(); return make(Tok::kComma, ",", line, column);
      case ':': advance(); return make(Tok::kColon, ":", line, column);
      case '=':
        advance();
        if (peek() == '>') {
          advance();
          return make(Tok::kFatArrow, "=>", line, column);
        }
        return make(Tok::kEquals, "=", line, column);
      case '-':
        advance();
        if (peek() == '>') {
          advance();
          return make(Tok::kArrow, "->", line, column);
        }
        fail("stray '-'");
      case '"': return lex_string(line, column);
      default:
        fail(std::string("unexpected character '") + c + "'");
    }
  }

  Token lex_number(int line, int column) {
    std::string s;
    if (peek() == '-') s += advance();
    if (peek() == 'i') {  // -inf; bare inf arrives as an identifier
      for (const char* p = "inf"; *p; ++p) {
        if (peek() != *p) fail("malformed number");
        s += advance();
      }
    } else {
      bool digits = false;
      while (std::isdigit(static_cast<unsigned char>(peek()))) {
        s += advance();
        digits = true;
      }
      if (peek() == '.') {
        s += advance();
        while (std::isdigit(static_cast<unsigned char>(peek()))) {
          s += advance();
          digits = true;
        }
      }
      if (!digits) fail("malformed number");
      if (peek() == 'e' || peek() == 'E') {
        s += advance();
        if (peek() == '+' || peek() == '-') s += advance();
        if (!std::isdigit(static_cast<unsigned char>(peek()))) {
          fail("malformed exponent");
        }
        while (std::isdigit(static_cast<unsigned char>(peek()))) s += advance();
      }
    }
    double value = 0.0;
    if (!parse_number(s, &value)) fail("malformed number: " + s);
    Token t = make(Tok::kNumber, std::move(s), line, column);
    t.value = value;
    return t;
  }

  Token lex_string(int line, int column) {
    advance();  // opening quote
    std::string s;
    while (true) {
      if (pos_ >= text_.size() || peek() == '\n') {
        throw ParseError({file_, line, column}, "unterminated string");
      }
      char c = advance();
      if (c == '"') break;
      if (c == '\\') {
        char e = pos_ < text_.size() ? advance() : '\0';
        if (e == '"' || e == '\\') {
          s += e;
        } else {
          fail(std::string("unknown escape '\\") + e + "'");
        }
      } else {
        s += c;
      }
    }
    return make(Tok::kString, std::move(s), line, column);
  }

  const std::string& text_;
  std::string file_;
  size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

class Parser {
 public:
  Parser(std::vector<Token> tokens, std::string file)
      : tokens_(std::move(tokens)), file_(std::move(file)) {}

  ArchitectureModel run() {
    ArchitectureModel model;
    while (!at(Tok::kEnd)) {
      const Token& t = peek();
      if (t.kind != Tok::kIdent) {
        fail(t, "expected a top-level item",
             "one of: viewpoint, correspondence, requirement, scenario");
      }
      if (t.text == "viewpoint") {
        model.viewpoints.push_back(parse_viewpoint());
      } else if (t.text == "correspondence") {
        model.correspondences.push_back(parse_correspondence());
      } else if (t.text == "requirement") {
        model.requirements.push_back(parse_requirement());
      } else if (t.text == "scenario") {
        model.scenarios.push_back(parse_scenario());
      } else {
        fail(t, "unknown item '" + t.text + "'",
             "one of: viewpoint, correspondence, requirement, scenario");
      }
    }
    model.canonicalize();
    return model;
  }

 private:
  const Token& peek(size_t ahead = 0) const {
    size_t i = pos_ + ahead;
    return i < tokens_.size() ? tokens_[i] : tokens_.back();
  }
  bool at(Tok kind) const { return peek().kind == kind; }

  const Token& advance() {
    const Token& t = tokens_[pos_];
    if (pos_ + 1 < tokens_.size()) ++pos_;  // never step past the end token
    return t;
  }

  [[noreturn]] void fail(const Token& t, const std::string& message,
                         std::string expected = "") const {
    throw ParseError({file_, t.line, t.column}, message, std::move(expected));
  }

  const Token& expect(Tok kind, const std::string& what) {
    const Token& t = peek();
    if (t.kind != kind) {
      fail(t, "expected " + what + ", found " + describe(t), what);
    }
    return advance();
  }

  static std::string describe(const Token& t) {
    if (t.kind == Tok::kIdent) return "'" + t.text + "'";
    if (t.kind == Tok::kNumber) return "number " + t.text;
    return tok_name(t.kind);
  }

  std::string expect_ident(const std::string& what) {
    return expect(Tok::kIdent, what).text;
  }

  void expect_keyword(const std::string& word) {
    const Token& t = peek();
    if (t.kind != Tok::kIdent || t.text != word) {
      fail(t, "expected '" + word + "', found " + describe(t), "'" + word + "'");
    }
    advance();
  }

  bool accept_keyword(const std::string& word) {
    if (at(Tok::kIdent) && peek().text == word) {
      advance();
      return true;
    }
    return false;
  }

  double expect_real(const std::string& what) {
    const Token& t = peek();
    if (t.kind == Tok::kNumber) {
      advance();
      return t.value;
    }
    if (t.kind == Tok::kIdent && t.text == "inf") {
      advance();
      return std::numeric_limits<double>::infinity();
    }
    fail(t, "expected " + what + ", found " + describe(t), "number");
  }

  Interval parse_interval(const std::string& what) {
    expect(Tok::kLBracket, "'[' opening the " + what + " interval");
    Interval iv;
    iv.lo = expect_real(what + " lower bound");
    expect(Tok::kComma, "','");
    iv.hi = expect_real(what + " upper bound");
    expect(Tok::kRBracket, "']'");
    return iv;
  }

  // `vp.element` and `source.metric` tokens split at the first dot.
  static bool split_dotted(const std::string& s, std::string* head, std::string* tail) {
    size_t dot = s.find('.');
    if (dot == std::string::npos || dot == 0 || dot + 1 == s.size()) return false;
    *head = s.substr(0, dot);
    *tail = s.substr(dot + 1);
    return true;
  }

  Viewpoint parse_viewpoint() {
    expect_keyword("viewpoint");
    Viewpoint vp;
    const Token& kind_tok = peek();
    std::string kind = expect_ident("viewpoint kind");
    if (kind == "functional") vp.kind = ViewpointKind::kFunctional;
    else if (kind == "capability") vp.kind = ViewpointKind::kCapability;
    else if (kind == "software") vp.kind = ViewpointKind::kSoftware;
    else if (kind == "hardware") vp.kind = ViewpointKind::kHardware;
    else fail(kind_tok, "unknown viewpoint kind '" + kind + "'",
              "one of: functional, capability, software, hardware");
    // id is optional; a bare `viewpoint capability { ... }` is named by kind
    vp.id = at(Tok::kIdent) ? expect_ident("viewpoint id") : kind;
    expect(Tok::kLBrace, "'{'");
    while (!at(Tok::kRBrace)) {
      const Token& t = peek();
      if (t.kind != Tok::kIdent) {
        fail(t, "expected a viewpoint statement", "one of: node, edge, skill");
      }
      if (t.text == "node") {
        advance();
        vp.nodes.push_back(expect_ident("node id"));
        expect(Tok::kSemi, "';'");
      } else if (t.text == "edge") {
        advance();
        Edge e;
        e.source = expect_ident("edge source");
        expect(Tok::kArrow, "'->'");
        e.target = expect_ident("edge target");
        if (at(Tok::kColon)) {
          advance();
          e.label = expect_ident("edge label");
        }
        expect(Tok::kSemi, "';'");
        vp.edges.push_back(std::move(e));
      } else if (t.text == "skill") {
        vp.skills.push_back(parse_skill());
      } else {
        fail(t, "unknown viewpoint statement '" + t.text + "'",
             "one of: node, edge, skill");
      }
    }
    expect(Tok::kRBrace, "'}'");
    return vp;
  }

  Skill parse_skill() {
    expect_keyword("skill");
    Skill s;
    s.id = expect_ident("skill id");
    if (accept_keyword("requires")) {
      s.requires_ids.push_back(expect_ident("required skill id"));
      while (at(Tok::kComma)) {
        advance();
        s.requires_ids.push_back(expect_ident("required skill id"));
      }
    }
    if (accept_keyword("thresholds")) {
      s.thresholds.degraded = expect_real("theta_degraded");
      s.thresholds.unavailable = expect_real("theta_unavailable");
    }
    while (at(Tok::kIdent) && peek().text == "metric") {
      s.bindings.push_back(parse_metric());
    }
    expect(Tok::kSemi, "';'");
    return s;
  }

  MetricBinding parse_metric() {
    expect_keyword("metric");
    MetricBinding b;
    const Token& name_tok = peek();
    std::string name = expect_ident("metric name (source.metric)");
    if (!split_dotted(name, &b.source, &b.metric)) {
      fail(name_tok, "metric name must be source.metric, got '" + name + "'");
    }
    const Token& kind_tok = peek();
    std::string kind = expect_ident("metric kind");
    if (kind == "heartbeat") b.kind = MetricKind::kHeartbeat;
    else if (kind == "counter") b.kind = MetricKind::kCounter;
    else if (kind == "scalar") b.kind = MetricKind::kScalar;
    else fail(kind_tok, "unknown metric kind '" + kind + "'",
              "one of: heartbeat, counter, scalar");
    expect_keyword("nominal");
    b.nominal = parse_interval("nominal");
    expect_keyword("unavailable");
    b.unavailable = parse_interval("unavailable");
    if (accept_keyword("timeout")) {
      b.timeout = expect_real("timeout");
    }
    return b;
  }

  Correspondence parse_correspondence() {
    expect_keyword("correspondence");
    Correspondence c;
    c.id = expect_ident("correspondence id");
    c.from_viewpoint = expect_ident("source viewpoint id");
    expect(Tok::kArrow, "'->'");
    c.to_viewpoint = expect_ident("target viewpoint id");
    expect(Tok::kLBrace, "'{'");
    while (!at(Tok::kRBrace)) {
      std::string from = expect_ident("element id");
      expect(Tok::kFatArrow, "'=>'");
      c.pairs.push_back({from, expect_ident("element id")});
      while (at(Tok::kComma)) {
        advance();
        c.pairs.push_back({from, expect_ident("element id")});
      }
      expect(Tok::kSemi, "';'");
    }
    expect(Tok::kRBrace, "'}'");
    return c;
  }

  Requirement parse_requirement() {
    expect_keyword("requirement");
    Requirement r;
    r.id = expect_ident("requirement id");
    const Token& kind_tok = peek();
    std::string kind = expect_ident("requirement kind");
    if (kind == "safety_goal") r.kind = RequirementKind::kSafetyGoal;
    else if (kind == "hazard") r.kind = RequirementKind::kHazard;
    else if (kind == "rms") r.kind = RequirementKind::kRiskMinimalState;
    else if (kind == "functional") r.kind = RequirementKind::kFunctional;
    else fail(kind_tok, "unknown requirement kind '" + kind + "'",
              "one of: safety_goal, hazard, rms, functional");
    expect_keyword("on");
    r.anchors.push_back(parse_anchor());
    while (at(Tok::kComma)) {
      advance();
      r.anchors.push_back(parse_anchor());
    }
    expect_keyword("text");
    r.text = expect(Tok::kString, "requirement text").text;
    expect(Tok::kSemi, "';'");
    return r;
  }

  Anchor parse_anchor() {
    std::string token = expect_ident("anchor (viewpoint.element)");
    Anchor a;
    if (!split_dotted(token, &a.viewpoint, &a.element)) {
      a.viewpoint.clear();
      a.element = token;
    }
    return a;
  }

  ScenarioProfile parse_scenario() {
    expect_keyword("scenario");
    ScenarioProfile sc;
    sc.id = expect_ident("scenario id");
    expect(Tok::kLBrace, "'{'");
    while (!at(Tok::kRBrace)) {
      const Token& key_tok = peek();
      std::string key = expect_ident("scenario key");
      expect(Tok::kEquals, "'='");
      double v = expect_real("value of " + key);
      expect(Tok::kSemi, "';'");
      std::optional<double>* slot = nullptr;
      if (key == "v_init") slot = &sc.v_init_v;
      else if (key == "d_crossing") slot = &sc.d_crossing_v;
      else if (key == "a_max") slot = &sc.a_max_v;
      else if (key == "mu") slot = &sc.mu_v;
      else if (key == "t_react") slot = &sc.t_react_v;
      else if (key == "d_detect") slot = &sc.d_detect_v;
      else if (key == "van_offset_lat") slot = &sc.van_offset_lat_v;
      else if (key == "van_length") slot = &sc.van_length_v;
      else if (key == "ped_lat") slot = &sc.ped_lat_v;
      else if (key == "g") slot = &sc.g_v;
      else fail(key_tok, "unknown scenario key '" + key + "'");
      if (slot->has_value()) {
        fail(key_tok, "duplicate scenario key '" + key + "'");
      }
      *slot = v;
    }
    expect(Tok::kRBrace, "'}'");
    return sc;
  }

  std::vector<Token> tokens_;
  std::string file_;
  size_t pos_ = 0;
};

// serializer

void emit_skill(const Skill& s, std::string* out) {
  *out += "  skill " + s.id;
  if (!s.requires_ids.empty()) {
    *out += " requires " + join(s.requires_ids, ", ");
  }
  *out += " thresholds " + format_number(s.thresholds.degraded) + " " +
          format_number(s.thresholds.unavailable);
  for (const auto& b : s.bindings) {
    *out += "\n    metric " + b.source + "." + b.metric + " " +
            std::string(to_string(b.kind)) + " nominal [" +
            format_number(b.nominal.lo) + ", " + format_number(b.nominal.hi) +
            "] unavailable [" + format_number(b.unavailable.lo) + ", " +
            format_number(b.unavailable.hi) + "]";
    if (b.timeout) *out += " timeout " + format_number(*b.timeout);
  }
  *out += ";\n";
}

std::string escape_string(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

void emit_scenario_key(const std::string& key, const std::optional<double>& v,
                       std::string* out) {
  if (v) *out += "  " + key + " = " + format_number(*v) + ";\n";
}

}  // namespace

ArchitectureModel parse_adl(const std::string& text, const std::string& filename) {
  Lexer lexer(text, filename);
  Parser parser(lexer.run(), filename);
  return parser.run();
}

std::string serialize_adl(const ArchitectureModel& input) {
  ArchitectureModel model = input;
  model.canonicalize();

  std::string out = "# capcheck adl v1\n";
  for (const auto& vp : model.viewpoints) {
    out += "\nviewpoint " + std::string(to_string(vp.kind));
    if (vp.id != to_string(vp.kind)) out += " " + vp.id;
    out += " {\n";
    for (const auto& n : vp.nodes) out += "  node " + n + ";\n";
    for (const auto& e : vp.edges) {
      out += "  edge " + e.source + " -> " + e.target;
      if (!e.label.empty()) out += " : " + e.label;
      out += ";\n";
    }
    for (const auto& s : vp.skills) emit_skill(s, &out);
    out += "}\n";
  }
  for (const auto& c : model.correspondences) {
    out += "\ncorrespondence " + c.id + " " + c.from_viewpoint + " -> " +
           c.to_viewpoint + " {\n";
    for (const auto& p : c.pairs) out += "  " + p.from + " => " + p.to + ";\n";
    out += "}\n";
  }
  for (const auto& r : model.requirements) {
    std::vector<std::string> anchors;
    for (const auto& a : r.anchors) {
      anchors.push_back(a.viewpoint.empty() ? a.element
                                            : a.viewpoint + "." + a.element);
    }
    out += "\nrequirement " + r.id + " " + std::string(to_string(r.kind)) +
           " on " + join(anchors, ", ") + " text " + escape_string(r.text) +
           ";\n";
  }
  for (const auto& sc : model.scenarios) {
    out += "\nscenario " + sc.id + " {\n";
    emit_scenario_key("v_init", sc.v_init_v, &out);
    emit_scenario_key("d_crossing", sc.d_crossing_v, &out);
    emit_scenario_key("a_max", sc.a_max_v, &out);
    emit_scenario_key("mu", sc.mu_v, &out);
    emit_scenario_key("t_react", sc.t_react_v, &out);
    emit_scenario_key("d_detect", sc.d_detect_v, &out);
    emit_scenario_key("van_offset_lat", sc.van_offset_lat_v, &out);
    emit_scenario_key("van_length", sc.van_length_v, &out);
    emit_scenario_key("ped_lat", sc.ped_lat_v, &out);
    emit_scenario_key("g", sc.g_v, &out);
    out += "}\n";
  }
  return out;
}

}  // namespace capcheck
