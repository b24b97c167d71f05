// Copyright (c) the cove-sim contributors.
// Licensed under the Apache 2.0 License.

#include "scenario/parser.hpp"

#include <charconv>
#include <sstream>

namespace cove::scenario {

namespace {

struct Token {
  std::string text;
  size_t column;  // 1-based
};

std::vector<Token> tokenize(const std::string& line) {
  std::vector<Token> out;
  size_t i = 0;
  while (i < line.size()) {
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    if (line[i] == '#') break;
    size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
    }
    out.push_back({line.substr(start, i - start), start + 1});
  }
  return out;
}

class LineParser {
 public:
  LineParser(std::vector<Token> tokens, size_t line)
      : tokens_(std::move(tokens)), line_(line) {}

  bool done() const { return pos_ >= tokens_.size(); }
  size_t remaining() const { return tokens_.size() - pos_; }

  const Token& peek() const { return tokens_[pos_]; }

  std::string take_word() { return tokens_[pos_++].text; }

  bool take_u64(uint64_t& out) {
    if (done()) return false;
    const std::string& t = tokens_[pos_].text;
    const char* begin = t.data();
    const char* end = t.data() + t.size();
    int base = 10;
    if (t.size() > 2 && t[0] == '0' && (t[1] == 'x' || t[1] == 'X')) {
      begin += 2;
      base = 16;
    }
    auto [ptr, ec] = std::from_chars(begin, end, out, base);
    if (ec != std::errc{} || ptr != end || begin == end) return false;
    ++pos_;
    return true;
  }

  ParseError err(ParseError::Category cat, const std::string& message) const {
    size_t col = pos_ < tokens_.size() ? tokens_[pos_].column
                 : tokens_.empty()     ? 1
                                       : tokens_.back().column +
                                           tokens_.back().text.size();
    return {cat, line_, col, message};
  }

 private:
  std::vector<Token> tokens_;
  size_t line_;
  size_t pos_ = 0;
};

struct HostOpSpec {
  OpKind kind;
  uint64_t fn;
  int min_args;
  int max_args;
};

const std::map<std::string, HostOpSpec>& host_ops() {
  static const std::map<std::string, HostOpSpec> ops = {
      {"boot", {OpKind::Boot, 0, 0, 0}},
      {"tsm_info", {OpKind::Covh, kCovhTsmInfo, 0, 0}},
      {"convert", {OpKind::Covh, kCovhConvertPages, 2, 2}},
      {"reclaim", {OpKind::Covh, kCovhReclaimPages, 2, 2}},
      {"tvm_create", {OpKind::Covh, kCovhTvmCreate, 2, 3}},
      {"tvm_add_page_table_pages", {OpKind::Covh, kCovhAddPageTablePages, 3, 3}},
      {"tvm_add_measured_pages", {OpKind::Covh, kCovhAddMeasuredPages, 4, 4}},
      {"tvm_finalize", {OpKind::Covh, kCovhFinalize, 1, 1}},
      {"tvm_run", {OpKind::Covh, kCovhRun, 2, 2}},
      {"tvm_add_zero_pages", {OpKind::Covh, kCovhAddZeroPages, 3, 3}},
      {"tvm_add_shared_pages", {OpKind::Covh, kCovhAddSharedPages, 3, 3}},
      {"tvm_reassign_pages", {OpKind::Covh, kCovhReassignPages, 3, 3}},
      {"tvm_destroy", {OpKind::Covh, kCovhDestroy, 1, 1}},
      {"covi_bind", {OpKind::Covh, kCoviBindInterruptFile, 3, 3}},
      {"read", {OpKind::Read, 0, 1, 1}},
      {"write", {OpKind::Write, 0, 2, 2}},
      {"fetch", {OpKind::Fetch, 0, 1, 1}},
      {"inject", {OpKind::Inject, 0, 3, 3}},
      {"intfile_read", {OpKind::IntfileRead, 0, 2, 2}},
      {"intfile_write", {OpKind::IntfileWrite, 0, 3, 3}},
  };
  return ops;
}

std::optional<ParseError> parse_expectation(LineParser& lp, Expectation& out) {
  if (lp.done()) return std::nullopt;
  if (lp.peek().text != "expect") {
    return lp.err(ParseError::Category::Syntax,
                  "trailing tokens; did you mean 'expect ...'?");
  }
  lp.take_word();
  if (lp.done()) {
    return lp.err(ParseError::Category::ArityMismatch,
                  "expect requires a clause");
  }
  std::string kind = lp.take_word();
  if (kind == "ok") {
    out.kind = Expectation::Kind::Ok;
  } else if (kind == "error") {
    if (lp.done()) {
      return lp.err(ParseError::Category::ArityMismatch,
                    "expect error requires a status name");
    }
    std::string name = lp.take_word();
    auto code = abi_status_from_string(name);
    if (!code.has_value()) {
      return lp.err(ParseError::Category::Syntax,
                    "unknown status '" + name + "'");
    }
    out.kind = Expectation::Kind::Error;
    out.error = *code;
  } else if (kind == "fault") {
    if (lp.done()) {
      return lp.err(ParseError::Category::ArityMismatch,
                    "expect fault requires a kind");
    }
    std::string name = lp.take_word();
    auto exc = exception_kind_from_string(name);
    if (!exc.has_value()) {
      return lp.err(ParseError::Category::Syntax,
                    "unknown fault kind '" + name + "'");
    }
    out.kind = Expectation::Kind::Fault;
    out.fault = *exc;
  } else if (kind == "value") {
    out.kind = Expectation::Kind::Value;
    if (!lp.take_u64(out.value)) {
      return lp.err(ParseError::Category::ArityMismatch,
                    "expect value requires an integer");
    }
  } else if (kind == "exit") {
    if (lp.done()) {
      return lp.err(ParseError::Category::ArityMismatch,
                    "expect exit requires a reason");
    }
    std::string name = lp.take_word();
    out.kind = Expectation::Kind::Exit;
    if (name == "halted") {
      out.exit_reason = TvmExit::Reason::Halted;
    } else if (name == "guest_page_fault") {
      out.exit_reason = TvmExit::Reason::GuestPageFault;
    } else if (name == "guest_request") {
      out.exit_reason = TvmExit::Reason::GuestRequest;
    } else if (name == "wfi") {
      out.exit_reason = TvmExit::Reason::Wfi;
    } else if (name == "interrupt_pending") {
      out.exit_reason = TvmExit::Reason::InterruptPending;
    } else {
      return lp.err(ParseError::Category::Syntax,
                    "unknown exit reason '" + name + "'");
    }
    uint64_t arg;
    if (lp.take_u64(arg)) out.exit_arg = arg;
  } else {
    return lp.err(ParseError::Category::Syntax,
                  "unknown expectation '" + kind + "'");
  }
  if (!lp.done()) {
    return lp.err(ParseError::Category::Syntax,
                  "trailing tokens after expectation");
  }
  return std::nullopt;
}

std::optional<ParseError> parse_hex_bytes(LineParser& lp, size_t max_len,
                                          std::vector<uint8_t>& out) {
  if (lp.done()) {
    return lp.err(ParseError::Category::ArityMismatch, "hex bytes expected");
  }
  auto bytes = crypto::from_hex(lp.peek().text);
  if (!bytes.has_value() || bytes->size() > max_len) {
    return lp.err(ParseError::Category::Syntax, "invalid hex literal");
  }
  lp.take_word();
  out = std::move(*bytes);
  return std::nullopt;
}

std::optional<ParseError> parse_program_action(LineParser& lp, TvmProgram& out) {
  std::string word = lp.take_word();
  if (word == "touch") {
    if (lp.done()) {
      return lp.err(ParseError::Category::ArityMismatch,
                    "touch requires an access kind");
    }
    std::string kind = lp.take_word();
    AccessKind access;
    if (kind == "load") {
      access = AccessKind::Load;
    } else if (kind == "store") {
      access = AccessKind::Store;
    } else if (kind == "fetch") {
      access = AccessKind::Fetch;
    } else {
      return lp.err(ParseError::Category::Syntax,
                    "unknown access kind '" + kind + "'");
    }
    uint64_t gpa, value = 0;
    if (!lp.take_u64(gpa)) {
      return lp.err(ParseError::Category::ArityMismatch, "touch requires a gpa");
    }
    if (access == AccessKind::Store && !lp.take_u64(value)) {
      return lp.err(ParseError::Category::ArityMismatch,
                    "store requires a value");
    }
    out.push_back(Action::touch(access, gpa, value));
  } else if (word == "covg") {
    if (lp.done()) {
      return lp.err(ParseError::Category::ArityMismatch,
                    "covg requires a call name");
    }
    std::string call = lp.take_word();
    if (call == "share" || call == "unshare") {
      uint64_t gpa, count;
      if (!lp.take_u64(gpa) || !lp.take_u64(count)) {
        return lp.err(ParseError::Category::ArityMismatch,
                      "covg share/unshare requires gpa and count");
      }
      out.push_back(Action::covg(call == "share" ? kCovgShare : kCovgUnshare,
                                 gpa, count));
    } else if (call == "get_evidence") {
      Action a = Action::covg(kCovgGetEvidence);
      if (!lp.done()) {
        std::vector<uint8_t> bytes;
        if (auto e = parse_hex_bytes(lp, 64, bytes)) return e;
        std::copy(bytes.begin(), bytes.end(), a.report_data.begin());
      }
      out.push_back(a);
    } else {
      return lp.err(ParseError::Category::UnknownOp,
                    "unknown covg call '" + call + "'");
    }
  } else if (word == "wfi") {
    out.push_back(Action::wfi());
  } else if (word == "exit") {
    uint64_t code;
    if (!lp.take_u64(code)) {
      return lp.err(ParseError::Category::ArityMismatch,
                    "exit requires a code");
    }
    out.push_back(Action::exit(code));
  } else {
    return lp.err(ParseError::Category::UnknownOp,
                  "unknown program action '" + word + "'");
  }
  if (!lp.done()) {
    return lp.err(ParseError::Category::Syntax, "trailing tokens in action");
  }
  return std::nullopt;
}

std::optional<ParseError> parse_config(LineParser& lp, PlatformConfig& cfg) {
  if (lp.done()) {
    return lp.err(ParseError::Category::ArityMismatch, "config requires a key");
  }
  std::string key = lp.take_word();
  if (key == "memory_pages") {
    if (!lp.take_u64(cfg.memory_pages)) {
      return lp.err(ParseError::Category::ArityMismatch, "integer expected");
    }
    if (cfg.memory_pages < 8 || cfg.memory_pages > 65536) {
      return lp.err(ParseError::Category::Syntax,
                    "memory_pages must be within 8..65536");
    }
  } else if (key == "harts") {
    uint64_t n;
    if (!lp.take_u64(n) || n < 1 || n > 64) {
      return lp.err(ParseError::Category::ArityMismatch,
                    "hart count must be within 1..64");
    }
    cfg.hart_count = static_cast<uint32_t>(n);
  } else if (key == "max_tvms") {
    if (!lp.take_u64(cfg.max_tvms) || cfg.max_tvms < 1 ||
        cfg.max_tvms > 1024) {
      return lp.err(ParseError::Category::ArityMismatch,
                    "max_tvms must be within 1..1024");
    }
  } else if (key == "debug_platform") {
    uint64_t v;
    if (!lp.take_u64(v)) {
      return lp.err(ParseError::Category::ArityMismatch, "0 or 1 expected");
    }
    cfg.debug_platform = v != 0;
  } else if (key == "tsm_blob") {
    std::vector<uint8_t> bytes;
    if (auto e = parse_hex_bytes(lp, 1 << 20, bytes)) return e;
    cfg.tsm_blob = std::move(bytes);
  } else if (key == "tsm_driver_blob") {
    std::vector<uint8_t> bytes;
    if (auto e = parse_hex_bytes(lp, 1 << 20, bytes)) return e;
    cfg.tsm_driver_blob = std::move(bytes);
  } else if (key == "root_secret") {
    std::vector<uint8_t> bytes;
    if (auto e = parse_hex_bytes(lp, 32, bytes)) return e;
    if (bytes.size() != 32) {
      return lp.err(ParseError::Category::Syntax,
                    "root_secret must be 32 bytes");
    }
    std::copy(bytes.begin(), bytes.end(), cfg.root_secret.begin());
  } else {
    return lp.err(ParseError::Category::UnknownOp,
                  "unknown config key '" + key + "'");
  }
  if (!lp.done()) {
    return lp.err(ParseError::Category::Syntax, "trailing tokens after config");
  }
  return std::nullopt;
}

// host/adversary step: op already looked up, args + optional keyword forms.
std::optional<ParseError> parse_host_op(LineParser& lp, const std::string& name,
                                        Step& step) {
  // Two forms take keyword or symbol arguments.
  if (name == "tvm_add_memory_region") {
    step.op.kind = OpKind::Covh;
    step.op.fn = kCovhAddMemoryRegion;
    uint64_t tvm;
    if (!lp.take_u64(tvm)) {
      return lp.err(ParseError::Category::ArityMismatch, "tvm id expected");
    }
    if (lp.done()) {
      return lp.err(ParseError::Category::ArityMismatch,
                    "region kind (conf|shared) expected");
    }
    std::string kind = lp.take_word();
    uint64_t kind_num;
    if (kind == "conf") {
      kind_num = 0;
    } else if (kind == "shared") {
      kind_num = 1;
    } else {
      return lp.err(ParseError::Category::Syntax,
                    "region kind must be conf or shared");
    }
    uint64_t gpa, count;
    if (!lp.take_u64(gpa) || !lp.take_u64(count)) {
      return lp.err(ParseError::Category::ArityMismatch,
                    "gpa and page count expected");
    }
    step.op.args = {tvm, kind_num, gpa, count};
    return std::nullopt;
  }
  if (name == "tvm_create_vcpu") {
    step.op.kind = OpKind::Covh;
    step.op.fn = kCovhCreateVcpu;
    uint64_t tvm, vcpu, base, count;
    if (!lp.take_u64(tvm) || !lp.take_u64(vcpu) || !lp.take_u64(base) ||
        !lp.take_u64(count)) {
      return lp.err(ParseError::Category::ArityMismatch,
                    "tvm, vcpu, backing base and count expected");
    }
    if (lp.done()) {
      return lp.err(ParseError::Category::ArityMismatch,
                    "program name expected");
    }
    step.op.args = {tvm, vcpu, base, count};
    step.op.program = lp.take_word();
    return std::nullopt;
  }
  if (name == "covh_raw") {
    step.op.kind = OpKind::Covh;
    if (!lp.take_u64(step.op.fn)) {
      return lp.err(ParseError::Category::ArityMismatch,
                    "function id expected");
    }
    uint64_t arg;
    while (!lp.done() && lp.peek().text != "expect") {
      if (!lp.take_u64(arg)) {
        return lp.err(ParseError::Category::Syntax, "integer argument expected");
      }
      if (step.op.args.size() == 6) {
        return lp.err(ParseError::Category::ArityMismatch,
                      "at most 6 arguments");
      }
      step.op.args.push_back(arg);
    }
    return std::nullopt;
  }

  auto it = host_ops().find(name);
  if (it == host_ops().end()) {
    return lp.err(ParseError::Category::UnknownOp,
                  "unknown op '" + name + "'");
  }
  step.op.kind = it->second.kind;
  step.op.fn = it->second.fn;
  uint64_t arg;
  int n = 0;
  while (n < it->second.max_args && !lp.done() && lp.peek().text != "expect") {
    if (!lp.take_u64(arg)) {
      return lp.err(ParseError::Category::Syntax, "integer argument expected");
    }
    step.op.args.push_back(arg);
    ++n;
  }
  if (n < it->second.min_args) {
    return lp.err(ParseError::Category::ArityMismatch,
                  name + " requires " + std::to_string(it->second.min_args) +
                      " argument(s)");
  }
  return std::nullopt;
}

std::optional<ParseError> parse_tvm_op(LineParser& lp, const std::string& name,
                                       Step& step) {
  auto touch = [&](AccessKind access, bool needs_value) -> std::optional<ParseError> {
    step.op.kind = OpKind::GuestTouch;
    step.op.access = access;
    uint64_t gpa, value = 0;
    if (!lp.take_u64(gpa)) {
      return lp.err(ParseError::Category::ArityMismatch, "gpa expected");
    }
    if (needs_value && !lp.take_u64(value)) {
      return lp.err(ParseError::Category::ArityMismatch, "value expected");
    }
    step.op.args = {gpa, value};
    return std::nullopt;
  };
  if (name == "read") return touch(AccessKind::Load, false);
  if (name == "write") return touch(AccessKind::Store, true);
  if (name == "fetch") return touch(AccessKind::Fetch, false);
  if (name == "covg_share" || name == "covg_unshare") {
    step.op.kind = OpKind::GuestCovg;
    step.op.fn = name == "covg_share" ? kCovgShare : kCovgUnshare;
    uint64_t gpa, count;
    if (!lp.take_u64(gpa) || !lp.take_u64(count)) {
      return lp.err(ParseError::Category::ArityMismatch,
                    "gpa and count expected");
    }
    step.op.args = {gpa, count};
    return std::nullopt;
  }
  if (name == "covg_get_evidence") {
    step.op.kind = OpKind::GuestCovg;
    step.op.fn = kCovgGetEvidence;
    if (!lp.done() && lp.peek().text != "expect") {
      std::vector<uint8_t> bytes;
      if (auto e = parse_hex_bytes(lp, 64, bytes)) return e;
      std::copy(bytes.begin(), bytes.end(), step.op.report_data.begin());
    }
    return std::nullopt;
  }
  if (name == "intfile_read" || name == "intfile_write") {
    step.op.kind = OpKind::GuestIntfile;
    step.op.access =
        name == "intfile_read" ? AccessKind::Load : AccessKind::Store;
    uint64_t tvm, vcpu, value = 0;
    if (!lp.take_u64(tvm) || !lp.take_u64(vcpu)) {
      return lp.err(ParseError::Category::ArityMismatch,
                    "target tvm and vcpu expected");
    }
    if (name == "intfile_write" && !lp.take_u64(value)) {
      return lp.err(ParseError::Category::ArityMismatch, "value expected");
    }
    step.op.args = {tvm, vcpu, value};
    return std::nullopt;
  }
  return lp.err(ParseError::Category::UnknownOp,
                "unknown guest op '" + name + "'");
}

std::string canonical_text(const std::vector<Token>& tokens) {
  std::string out;
  for (const Token& t : tokens) {
    if (!out.empty()) out.push_back(' ');
    out += t.text;
  }
  return out;
}

}  // namespace

std::string ParseError::to_string() const {
  std::ostringstream os;
  os << "line " << line << ", column " << column << ": " << message;
  return os.str();
}

std::variant<Scenario, ParseError> parse_scenario(const std::string& text) {
  Scenario scenario;
  std::istringstream stream(text);
  std::string line;
  size_t line_no = 0;

  TvmProgram* open_program = nullptr;
  std::string open_program_name;

  while (std::getline(stream, line)) {
    ++line_no;
    std::vector<Token> tokens = tokenize(line);
    if (tokens.empty()) continue;
    LineParser lp(tokens, line_no);

    if (open_program != nullptr) {
      scenario.prelude += canonical_text(tokens) + "\n";
      if (tokens[0].text == "endprogram") {
        open_program = nullptr;
        continue;
      }
      if (auto e = parse_program_action(lp, *open_program)) return *e;
      continue;
    }

    std::string head = lp.take_word();
    if (head == "name") {
      if (lp.done()) {
        return lp.err(ParseError::Category::ArityMismatch,
                      "name requires an identifier");
      }
      scenario.name = lp.take_word();
      scenario.prelude += canonical_text(tokens) + "\n";
      continue;
    }
    if (head == "config") {
      if (auto e = parse_config(lp, scenario.config)) return *e;
      scenario.prelude += canonical_text(tokens) + "\n";
      continue;
    }
    if (head == "program") {
      if (lp.done()) {
        return lp.err(ParseError::Category::ArityMismatch,
                      "program requires a name");
      }
      open_program_name = lp.take_word();
      if (scenario.programs.contains(open_program_name)) {
        return lp.err(ParseError::Category::Syntax,
                      "duplicate program '" + open_program_name + "'");
      }
      open_program = &scenario.programs[open_program_name];
      scenario.prelude += canonical_text(tokens) + "\n";
      continue;
    }
    if (head == "endprogram") {
      return lp.err(ParseError::Category::Syntax, "endprogram without program");
    }

    Step step;
    step.line = line_no;
    step.text = canonical_text(tokens);
    if (head == "host") {
      step.actor = Step::Actor::Host;
    } else if (head == "adversary") {
      step.actor = Step::Actor::Adversary;
    } else if (head == "tvm") {
      step.actor = Step::Actor::Tvm;
      if (!lp.take_u64(step.actor_tvm) || !lp.take_u64(step.actor_vcpu)) {
        return lp.err(ParseError::Category::ArityMismatch,
                      "tvm actor requires id and vcpu");
      }
    } else {
      return lp.err(ParseError::Category::Syntax,
                    "unknown actor '" + head + "'");
    }

    if (lp.done()) {
      return lp.err(ParseError::Category::ArityMismatch, "op expected");
    }
    std::string op_name = lp.take_word();
    std::optional<ParseError> op_err =
        step.actor == Step::Actor::Tvm ? parse_tvm_op(lp, op_name, step)
                                       : parse_host_op(lp, op_name, step);
    if (op_err.has_value()) return *op_err;

    if (auto e = parse_expectation(lp, step.expect)) return *e;
    if (step.actor == Step::Actor::Adversary &&
        step.expect.kind == Expectation::Kind::None) {
      return lp.err(ParseError::Category::Syntax,
                    "adversary steps must state an expectation");
    }
    scenario.steps.push_back(std::move(step));
  }

  if (open_program != nullptr) {
    return ParseError{ParseError::Category::Syntax, line_no, 1,
                      "program '" + open_program_name + "' never ends"};
  }
  for (const Step& step : scenario.steps) {
    if (step.op.kind == OpKind::Covh && step.op.fn == kCovhCreateVcpu &&
        !scenario.programs.contains(step.op.program)) {
      return ParseError{ParseError::Category::Syntax, step.line, 1,
                        "undefined program '" + step.op.program + "'"};
    }
  }
  return scenario;
}

}  // namespace cove::scenario
