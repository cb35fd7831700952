#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "gatcwf/kernel.hpp"

namespace gatcwf::driver {

enum class Format { Text, Json };

struct Config {
  kernel::Flags flags;
  Format format = Format::Text;
};

/// Exit codes of the checker.
enum ExitCode : int { kOk = 0, kRefuted = 1, kUnknown = 2, kIoError = 3 };

struct FileReport {
  std::string file;
  std::vector<kernel::DeclReport> decls;
};

/// Check the declarations of one source text in order.
FileReport check_text(const Config& config, const std::string& text, const std::string& label);

int exit_code(const std::vector<FileReport>& reports);

/// One line (or object) per declaration; traces follow when enabled.
void render(const Config& config, const FileReport& report, std::ostream& out);

/// Reads, checks and renders every file. Unreadable files yield kIoError.
int run(const Config& config, const std::vector<std::string>& files, std::ostream& out, std::ostream& err);

/// Rewrite traces of both sides of a named check-eq. Returns an exit code.
int explain(const Config& config, const std::string& file, const std::string& name, std::ostream& out,
            std::ostream& err);

/// Default fuel, honouring GATCWF_FUEL.
std::size_t default_fuel();

}  // namespace gatcwf::driver
