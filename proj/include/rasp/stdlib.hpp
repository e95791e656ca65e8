#pragma once

// Shipped RASP program corpus and the task registry built on it.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rasp/error.hpp"
#include "rasp/frontend/lower.hpp"
#include "rasp/graph.hpp"
#include "rasp/printer.hpp"
#include "rasp/sequence.hpp"

namespace rasp::stdlib {

/// A stdlib file failed to read, parse or lower. `what()` names the file.
class LibraryError : public Error {
public:
    LibraryError(const std::string& what, bool syntax) : Error(what), syntax_(syntax) {}
    /// True for lex and parse failures.
    [[nodiscard]] bool syntax() const noexcept { return syntax_; }

private:
    bool syntax_;
};

/// RASP_LIB_PATH if set, else the directory the build was configured with.
std::filesystem::path default_lib_dir();

/// Library files in load order. dyck_select_best.rasp is included only when
/// the extension is enabled.
std::vector<std::string> lib_files(const Extensions& ext);

struct LoadedFile {
    std::string file;
    std::vector<frontend::Binding> bindings;
};

/// Lowers every library file into `env`, in order.
std::vector<LoadedFile> load_stdlib(frontend::Env& env, NameTable& names, const Extensions& ext,
                                    const std::filesystem::path& dir = default_lib_dir());

/// A fully loaded library with its own scope. Instances are cached per
/// extension setting and never change after construction.
class Library {
public:
    static const Library& standard(const Extensions& ext = {});

    Library(const Extensions& ext, const std::filesystem::path& dir);

    [[nodiscard]] const frontend::Env& env() const noexcept { return *env_; }
    [[nodiscard]] const NameTable& names() const noexcept { return names_; }
    [[nodiscard]] const std::vector<LoadedFile>& files() const noexcept { return files_; }

    /// Global binding by name; throws Error when missing.
    [[nodiscard]] const frontend::Value& value(std::string_view name) const;
    [[nodiscard]] SOp sop(std::string_view name) const;
    [[nodiscard]] Selector selector(std::string_view name) const;
    /// Binding made by one particular file (later files may shadow it globally).
    [[nodiscard]] std::optional<frontend::Value> binding(std::string_view file, std::string_view name) const;

private:
    NameTable names_;
    std::unique_ptr<frontend::Env> env_;
    std::vector<LoadedFile> files_;
};

/// Expected output on one input; nullopt positions are not compared.
struct Golden {
    std::string input;
    std::vector<std::optional<std::string>> expected;
};

struct ExpectedArch {
    int num_layers = 0;
    std::optional<int> max_heads;
    std::optional<int> total_heads;
    std::vector<int> heads_per_layer;  // empty when only summary counts are known
};

struct TaskEntry {
    std::string name;
    std::string file;
    std::string result;
    bool assume_bos = false;
    bool needs_select_best = false;
    std::size_t max_input = 0;  // 0 = unbounded
    std::vector<Golden> goldens;
    ExpectedArch arch;
};

const std::vector<TaskEntry>& tasks();
/// Throws Error for an unknown task.
const TaskEntry& task(std::string_view name);
SOp task_sop(const TaskEntry& t);
/// Evaluates the task on `input` as given (no BOS is added).
Sequence run_task(std::string_view name, std::string_view input);

/// True when every compared position of `golden` matches `actual`.
bool matches(const Golden& golden, const Sequence& actual);

}  // namespace rasp::stdlib
