#pragma once

#include "trilie/document.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace trilie {

struct CommandOptions {
    std::vector<std::string> forms;  ///< --form, in the order given
    std::vector<std::string> maps;   ///< --map, in the order given
    std::optional<std::string> cocycle;
    std::optional<std::size_t> n;
    std::uint64_t seed = 0;
    std::size_t attempts = 64;
};

struct Report {
    Json body;
    int exit_code = 0;  ///< 0 all verdicts pass, 1 a verdict failed, 2 input error

    std::string text() const { return body.dump(2) + "\n"; }
};

const std::vector<std::string>& command_names();

/// Runs one command. Input problems (unknown command, missing named object,
/// violated preconditions) throw InputError.
Report run_command(const std::string& command, const AlgebraDocument& doc, const CommandOptions& options,
                   const std::string& digest);

/// Parses the bytes and runs the command; input errors become an error report
/// with exit code 2.
Report execute(const std::string& command, std::string_view input, const CommandOptions& options);

}  // namespace trilie
