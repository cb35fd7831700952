#include "gatcwf/driver.hpp"

#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace gatcwf::driver {
namespace {

const char* decl_word(Decl::Kind k) {
  switch (k) {
    case Decl::Kind::LevelCtx: return "level-ctx";
    case Decl::Kind::PostulateCtx:
    case Decl::Kind::PostulateTy:
    case Decl::Kind::PostulateTm:
    case Decl::Kind::PostulateHom: return "postulate";
    case Decl::Kind::Def: return "def";
    case Decl::Kind::Check: return "check";
    case Decl::Kind::CheckEq: return "check-eq";
  }
  return "?";
}

std::string display_name(const kernel::DeclReport& r) {
  if (!r.name.empty()) return r.name;
  return std::string(decl_word(r.kind)) + "@" + std::to_string(r.pos.line);
}

std::string verdict_word(const kernel::DeclReport& r) {
  if (r.kind == Decl::Kind::CheckEq && r.status == kernel::Status::Ok) return "Yes";
  return kernel::to_string(r.status);
}

kernel::DeclReport parse_failure(kernel::ErrorKind kind, SourcePos pos, const std::string& message) {
  kernel::DeclReport r;
  r.name = "parse";
  r.pos = pos;
  r.status = kernel::Status::Refuted;
  r.error = kind;
  r.message = message;
  return r;
}

void render_trace(const char* side, const std::vector<conv::Step>& steps, std::ostream& out) {
  for (const auto& s : steps) out << "  " << side << ": " << conv::to_string(s) << '\n';
}

}  // namespace

std::size_t default_fuel() {
  if (const char* env = std::getenv("GATCWF_FUEL")) {
    try {
      return static_cast<std::size_t>(std::stoull(env));
    } catch (const std::exception&) {
    }
  }
  return 10000;
}

FileReport check_text(const Config& config, const std::string& text, const std::string& label) {
  FileReport report{label, {}};
  std::vector<Decl> decls;
  try {
    decls = parse(text, config.flags.mode);
  } catch (const ParseError& ex) {
    report.decls.push_back(parse_failure(kernel::ErrorKind::ParseError, ex.pos(), ex.what()));
    return report;
  } catch (const ModeError& ex) {
    report.decls.push_back(parse_failure(kernel::ErrorKind::ModeViolation, ex.pos(), ex.what()));
    return report;
  }
  kernel::Session session{Signature{}, 0, config.flags};
  for (const auto& d : decls) report.decls.push_back(kernel::check_decl(session, d));
  return report;
}

int exit_code(const std::vector<FileReport>& reports) {
  bool unknown = false;
  for (const auto& f : reports) {
    for (const auto& d : f.decls) {
      if (d.status == kernel::Status::Refuted) return kRefuted;
      if (d.status == kernel::Status::Unknown) unknown = true;
    }
  }
  return unknown ? kUnknown : kOk;
}

void render(const Config& config, const FileReport& report, std::ostream& out) {
  for (const auto& d : report.decls) {
    if (config.format == Format::Json) {
      nlohmann::ordered_json j;
      j["file"] = report.file;
      j["line"] = d.pos.line;
      j["kind"] = decl_word(d.kind);
      j["name"] = display_name(d);
      j["verdict"] = verdict_word(d);
      if (d.sort) j["sort"] = to_string(*d.sort);
      if (d.error) {
        j["error"] = {{"kind", kernel::to_string(*d.error)}, {"path", d.error_path}, {"message", d.message}};
      }
      j["steps"] = d.steps;
      if (config.flags.trace) {
        auto steps = [](const std::vector<conv::Step>& v) {
          nlohmann::json a = nlohmann::json::array();
          for (const auto& s : v) a.push_back(conv::to_string(s));
          return a;
        };
        j["lhs_trace"] = steps(d.lhs_trace);
        j["rhs_trace"] = steps(d.rhs_trace);
      }
      out << j.dump() << '\n';
      continue;
    }
    out << report.file << ':' << d.pos.line << ": " << decl_word(d.kind) << ' ' << display_name(d) << ": "
        << verdict_word(d);
    if (d.error) {
      out << ' ' << kernel::to_string(*d.error);
      if (!d.error_path.empty()) out << " at " << d.error_path;
      out << ": " << d.message;
    } else if (d.kind == Decl::Kind::CheckEq) {
      out << " (" << d.steps << " steps)";
    } else if (d.sort) {
      out << " : " << to_string(*d.sort);
    }
    out << '\n';
    if (config.flags.trace) {
      render_trace("lhs", d.lhs_trace, out);
      render_trace("rhs", d.rhs_trace, out);
    }
  }
}

int run(const Config& config, const std::vector<std::string>& files, std::ostream& out, std::ostream& err) {
  std::vector<FileReport> reports;
  for (const auto& file : files) {
    std::ifstream in(file, std::ios::binary);
    if (!in) {
      err << file << ": cannot read file\n";
      return kIoError;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    reports.push_back(check_text(config, buf.str(), file));
    render(config, reports.back(), out);
  }
  return exit_code(reports);
}

int explain(const Config& config, const std::string& file, const std::string& name, std::ostream& out,
            std::ostream& err) {
  std::ifstream in(file, std::ios::binary);
  if (!in) {
    err << file << ": cannot read file\n";
    return kIoError;
  }
  std::stringstream buf;
  buf << in.rdbuf();
  Config traced = config;
  traced.flags.trace = true;
  FileReport report = check_text(traced, buf.str(), file);
  for (const auto& d : report.decls) {
    if (display_name(d) != name) continue;
    if (d.kind != Decl::Kind::CheckEq) {
      err << name << ": not a check-eq declaration\n";
      return kRefuted;
    }
    out << "lhs:\n";
    for (const auto& s : d.lhs_trace) out << "  " << conv::to_string(s) << '\n';
    if (d.lhs_nf) out << "  = " << print(d.lhs_nf) << '\n';
    out << "rhs:\n";
    for (const auto& s : d.rhs_trace) out << "  " << conv::to_string(s) << '\n';
    if (d.rhs_nf) out << "  = " << print(d.rhs_nf) << '\n';
    if (d.error && d.error != kernel::ErrorKind::NotConvertible && d.error != kernel::ErrorKind::UnknownConversion) {
      out << "verdict: " << verdict_word(d) << ' ' << kernel::to_string(*d.error) << ": " << d.message << '\n';
      return kRefuted;
    }
    out << "verdict: " << conv::to_string(d.verdict) << '\n';
    return d.status == kernel::Status::Ok ? kOk : d.status == kernel::Status::Unknown ? kUnknown : kRefuted;
  }
  err << name << ": no such declaration\n";
  return kRefuted;
}

}  // namespace gatcwf::driver
