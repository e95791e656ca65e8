#include "rasp/stdlib.hpp"

#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>

#include "rasp/eval.hpp"
#include "rasp/frontend/parser.hpp"

#ifndef RASP_DEFAULT_LIB_DIR
#define RASP_DEFAULT_LIB_DIR "lib"
#endif

namespace rasp::stdlib {

std::filesystem::path default_lib_dir() {
    if (const char* env = std::getenv("RASP_LIB_PATH"); env && *env) return env;
    return RASP_DEFAULT_LIB_DIR;
}

std::vector<std::string> lib_files(const Extensions& ext) {
    std::vector<std::string> files = {
        "selector_width.rasp", "hist.rasp",   "hist2.rasp",        "reverse.rasp", "sort.rasp",
        "most_freq.rasp",      "dyck1.rasp",  "shuffle_dyck.rasp", "dyck3.rasp",   "count.rasp",
    };
    if (ext.select_best) files.push_back("dyck_select_best.rasp");
    return files;
}

std::vector<LoadedFile> load_stdlib(frontend::Env& env, NameTable& names, const Extensions& ext,
                                    const std::filesystem::path& dir) {
    std::vector<LoadedFile> out;
    frontend::Lowerer lowerer(env, names, ext);
    for (const auto& file : lib_files(ext)) {
        const auto path = dir / file;
        std::ifstream in(path, std::ios::binary);
        if (!in) throw LibraryError("cannot read library file " + path.string(), false);
        std::ostringstream text;
        text << in.rdbuf();

        LoadedFile loaded{file, {}};
        try {
            const auto program = frontend::parse_source(text.str());
            for (const auto& stmt : program.statements) {
                auto result = lowerer.lower(stmt);
                if (auto* b = std::get_if<frontend::Binding>(&result)) loaded.bindings.push_back(std::move(*b));
            }
        } catch (const LexError& e) {
            throw LibraryError(file + ":" + e.what(), true);
        } catch (const ParseError& e) {
            throw LibraryError(file + ":" + e.what(), true);
        } catch (const Error& e) {
            throw LibraryError(file + ":" + e.what(), false);
        }
        out.push_back(std::move(loaded));
    }
    return out;
}

Library::Library(const Extensions& ext, const std::filesystem::path& dir)
    : env_(frontend::make_global_env(names_)) {
    files_ = load_stdlib(*env_, names_, ext, dir);
}

const Library& Library::standard(const Extensions& ext) {
    static std::mutex mutex;
    static std::map<bool, std::unique_ptr<Library>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[ext.select_best];
    if (!slot) slot = std::make_unique<Library>(ext, default_lib_dir());
    return *slot;
}

const frontend::Value& Library::value(std::string_view name) const {
    if (const auto* v = env_->lookup(name)) return *v;
    throw Error("library has no binding named '" + std::string(name) + "'");
}

SOp Library::sop(std::string_view name) const {
    const auto& v = value(name);
    if (const auto* s = std::get_if<SOp>(&v)) return *s;
    throw Error("library binding '" + std::string(name) + "' is not an s-op");
}

Selector Library::selector(std::string_view name) const {
    const auto& v = value(name);
    if (const auto* s = std::get_if<Selector>(&v)) return *s;
    throw Error("library binding '" + std::string(name) + "' is not a selector");
}

std::optional<frontend::Value> Library::binding(std::string_view file, std::string_view name) const {
    for (const auto& f : files_) {
        if (f.file != file) continue;
        std::optional<frontend::Value> found;
        for (const auto& b : f.bindings) {
            if (b.name == name) found = b.value;
        }
        return found;
    }
    return std::nullopt;
}

namespace {

using Expected = std::vector<std::optional<std::string>>;

// Expected display strings per position; "" marks an unchecked position.
Expected expect(std::initializer_list<const char*> items) {
    Expected out;
    for (const char* s : items) {
        if (*s) out.emplace_back(s);
        else out.emplace_back(std::nullopt);
    }
    return out;
}

std::vector<TaskEntry> make_tasks() {
    std::vector<TaskEntry> t;
    t.push_back({"reverse", "reverse.rasp", "reverse", false, false, 0,
                 {{"abc", expect({"c", "b", "a"})}}, {2, 1, std::nullopt, {1, 1}}});
    t.push_back({"hist_bos", "hist.rasp", "hist_bos", true, false, 0,
                 {{"§aba", expect({"", "2", "1", "2"})}}, {1, 1, std::nullopt, {1}}});
    t.push_back({"hist_nobos", "hist.rasp", "hist_nobos", false, false, 0,
                 {{"aba", expect({"2", "1", "2"})}}, {1, 2, std::nullopt, {2}}});
    t.push_back({"hist2", "hist2.rasp", "hist2", true, false, 0,
                 {{"§aabcd", expect({"", "1", "1", "3", "3", "3"})},
                  {"§aaabbccdef", expect({"", "1", "1", "1", "2", "2", "2", "2", "3", "3", "3"})}},
                 {2, 2, 3, {}}});
    t.push_back({"sort", "sort.rasp", "sort_input", true, false, 0,
                 {{"§cba", expect({"§", "a", "b", "c"})}}, {2, 1, std::nullopt, {}}});
    t.push_back({"most_freq", "most_freq.rasp", "most_freq", true, false, 20000,
                 {{"§abbccddd", expect({"", "d", "b", "c", "a", "§", "§", "§", "§"})}},
                 {3, 2, std::nullopt, {2, 1, 1}}});
    t.push_back({"dyck1", "dyck1.rasp", "dyck1PTF", false, false, 0,
                 {{"()())", expect({"P", "T", "P", "T", "F"})}}, {2, 1, std::nullopt, {}}});
    t.push_back({"dyck3", "dyck3.rasp", "dyck3PTF", false, false, 0, {}, {4, 2, std::nullopt, {}}});
    t.push_back({"dyck_select_best", "dyck_select_best.rasp", "dyck_select_best", false, true, 0, {},
                 {3, 1, std::nullopt, {}}});
    t.push_back({"shuffle_dyck2", "shuffle_dyck.rasp", "shuffle_dyck2", false, false, 0, {},
                 {2, std::nullopt, 3, {}}});
    return t;
}

}  // namespace

const std::vector<TaskEntry>& tasks() {
    static const std::vector<TaskEntry> table = make_tasks();
    return table;
}

const TaskEntry& task(std::string_view name) {
    for (const auto& t : tasks()) {
        if (t.name == name) return t;
    }
    throw Error("unknown task '" + std::string(name) + "'");
}

SOp task_sop(const TaskEntry& t) {
    return Library::standard(Extensions{t.needs_select_best}).sop(t.result);
}

Sequence run_task(std::string_view name, std::string_view input) {
    const auto& t = task(name);
    const auto seq = Sequence::from_string(input);
    if (t.max_input && seq.size() > t.max_input) {
        throw EvalError("task '" + t.name + "' accepts at most " + std::to_string(t.max_input) + " tokens");
    }
    return evaluate(task_sop(t), seq);
}

bool matches(const Golden& golden, const Sequence& actual) {
    if (golden.expected.size() != actual.size()) return false;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        if (golden.expected[i] && *golden.expected[i] != to_display(actual[i])) return false;
    }
    return true;
}

}  // namespace rasp::stdlib
