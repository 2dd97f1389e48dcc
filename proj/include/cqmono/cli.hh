#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cqmono::cli
{
    /// Exit codes: 0 affirmative verdict or plain success, 1 negative verdict, 2 usage, parse
    /// or validation error, 3 search budget or oracle bounds exceeded.
    enum ExitCode : int
    {
        affirmative = 0,
        negative = 1,
        usage_error = 2,
        resource_limit = 3
    };

    /// Runs one command line; args excludes the program name.
    auto run(const std::vector<std::string> & args, std::ostream & out, std::ostream & err) -> int;
}
