#pragma once

// Interactive and batch execution of RASP statements against a growing
// global scope.

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "rasp/compiler.hpp"
#include "rasp/eval.hpp"
#include "rasp/frontend/lower.hpp"
#include "rasp/printer.hpp"
#include "rasp/viz.hpp"

namespace rasp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 2;
inline constexpr int kExitSyntax = 3;
inline constexpr int kExitEval = 4;

/// Exit code for an exception escaping a session operation.
int exit_code_for(const std::exception& e);

struct SessionOptions {
    bool load_stdlib = true;
    Extensions extensions;
    std::string example = "hello";
    bool bos = false;  // prepend "§" to every example
};

class Session {
public:
    explicit Session(SessionOptions options = {});

    /// Runs every statement in `source`. Echoes go to `echo` when non-null.
    /// Stops at and rethrows the first error.
    void execute(std::string_view source, std::ostream* echo);

    /// Example input actually used for evaluation (with BOS if requested).
    [[nodiscard]] std::string example_input() const;
    void set_example(std::string example);

    [[nodiscard]] const frontend::Env& env() const noexcept { return *env_; }
    [[nodiscard]] const NameTable& names() const noexcept { return names_; }
    [[nodiscard]] const frontend::Value& lookup(std::string_view name) const;
    [[nodiscard]] SOp sop(std::string_view name) const;

    /// Statements bound by the user, in first-binding order.
    [[nodiscard]] const std::vector<std::pair<std::string, frontend::Value>>& bindings() const noexcept {
        return bindings_;
    }

    /// {name: value on the current example}; functions are omitted.
    [[nodiscard]] nlohmann::ordered_json bindings_json();
    [[nodiscard]] nlohmann::ordered_json value_json(const frontend::Value& v);

    [[nodiscard]] compiler::ArchReport arch(std::string_view name) const;
    [[nodiscard]] viz::FlowGraph flow(std::string_view name, std::string_view input) const;
    [[nodiscard]] viz::FlowGraph flow(const frontend::Value& target, std::string_view input) const;

    /// Human-readable rendering of a value on the current example.
    [[nodiscard]] std::string describe(const std::string& label, const frontend::Value& v);

    /// Read-evaluate-print loop until `:quit` or end of input.
    int repl(std::istream& in, std::ostream& out, bool prompt = true);

private:
    EvalContext& context();

    SessionOptions options_;
    NameTable names_;
    std::unique_ptr<frontend::Env> env_;
    std::unique_ptr<frontend::Lowerer> lowerer_;
    std::vector<std::pair<std::string, frontend::Value>> bindings_;
    std::optional<EvalContext> context_;
};

/// Entry point of the `rasp` executable.
int run_main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace rasp::cli
