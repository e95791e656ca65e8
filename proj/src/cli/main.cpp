#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "rasp/error.hpp"
#include "rasp/session.hpp"

namespace rasp::cli {
namespace {

struct CommonFlags {
    bool enable_select_best = false;
    bool bos = false;
    bool no_stdlib = false;
    std::string example = "hello";
};

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_flag("--enable-select-best", f.enable_select_best, "Enable the score/select_best extension");
    cmd->add_flag("--bos", f.bos, "Prepend the BOS token \"§\" to example inputs");
    cmd->add_flag("--no-stdlib", f.no_stdlib, "Do not load the standard library");
    cmd->add_option("--example", f.example, "Example input")->capture_default_str();
}

SessionOptions session_options(const CommonFlags& f) {
    SessionOptions o;
    o.load_stdlib = !f.no_stdlib;
    o.extensions.select_best = f.enable_select_best;
    o.example = f.example;
    o.bos = f.bos;
    return o;
}

std::optional<std::string> read_file(const std::string& path, std::ostream& err) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        err << "error: cannot read " << path << "\n";
        return std::nullopt;
    }
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
}

}  // namespace

int run_main(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"RASP interpreter and architecture compiler", "rasp"};
    app.require_subcommand(1);

    CommonFlags repl_flags;
    auto* repl = app.add_subcommand("repl", "Interactive read-evaluate-print loop");
    add_common(repl, repl_flags);

    CommonFlags run_flags;
    std::string run_file;
    bool run_json = false;
    std::string run_arch;
    std::string run_draw;
    auto* run = app.add_subcommand("run", "Execute a RASP file");
    add_common(run, run_flags);
    run->add_option("file", run_file, "RASP source file")->required();
    run->add_flag("--json", run_json, "Emit a JSON report instead of echoes");
    run->add_option("--arch", run_arch, "Report the architecture of this s-op");
    run->add_option("--draw", run_draw, "Draw the computation flow of this s-op on the example");

    CommonFlags arch_flags;
    std::string arch_file;
    std::string arch_target;
    bool arch_json = false;
    auto* arch = app.add_subcommand("arch", "Report the compiled architecture of an s-op");
    add_common(arch, arch_flags);
    arch->add_option("file", arch_file, "RASP source file")->required();
    arch->add_option("--target", arch_target, "s-op name")->required();
    arch->add_flag("--json", arch_json, "Emit JSON");

    CommonFlags draw_flags;
    std::string draw_file;
    std::string draw_target;
    std::string draw_input;
    std::string draw_format = "dot";
    auto* draw = app.add_subcommand("draw", "Render the computation flow of an s-op");
    add_common(draw, draw_flags);
    draw->add_option("file", draw_file, "RASP source file")->required();
    draw->add_option("--target", draw_target, "s-op name")->required();
    draw->add_option("--input", draw_input, "Example input")->required();
    draw->add_option("--format", draw_format, "dot, json or text")
        ->check(CLI::IsMember({"dot", "json", "text"}))
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (*repl) {
            Session session(session_options(repl_flags));
            return session.repl(std::cin, out);
        }
        if (*run) {
            const auto source = read_file(run_file, err);
            if (!source) return kExitIo;
            Session session(session_options(run_flags));
            session.execute(*source, run_json ? nullptr : &out);
            if (run_json) {
                nlohmann::ordered_json j;
                j["example"] = session.example_input();
                j["bindings"] = session.bindings_json();
                if (!run_arch.empty()) j["arch"] = session.arch(run_arch).to_json();
                if (!run_draw.empty()) j["draw"] = session.flow(run_draw, session.example_input()).to_json();
                out << j.dump(2) << "\n";
            } else {
                if (!run_arch.empty()) out << session.arch(run_arch).to_text();
                if (!run_draw.empty()) {
                    out << viz::render_flow(session.flow(run_draw, session.example_input()), viz::FlowFormat::Text);
                }
            }
            return kExitOk;
        }
        if (*arch) {
            const auto source = read_file(arch_file, err);
            if (!source) return kExitIo;
            Session session(session_options(arch_flags));
            session.execute(*source, nullptr);
            const auto report = session.arch(arch_target);
            out << (arch_json ? report.to_json().dump(2) + "\n" : report.to_text());
            return kExitOk;
        }
        if (*draw) {
            const auto source = read_file(draw_file, err);
            if (!source) return kExitIo;
            Session session(session_options(draw_flags));
            session.execute(*source, nullptr);
            const auto format = draw_format == "json"   ? viz::FlowFormat::Json
                                : draw_format == "text" ? viz::FlowFormat::Text
                                                        : viz::FlowFormat::Dot;
            out << viz::render_flow(session.flow(draw_target, draw_input), format);
            return kExitOk;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_code_for(e);
    }
    return kExitOk;
}

}  // namespace rasp::cli
