#include "rasp/session.hpp"

#include <cmath>

#include <istream>
#include <ostream>
#include <sstream>

#include "rasp/error.hpp"
#include "rasp/frontend/parser.hpp"
#include "rasp/stdlib.hpp"

namespace rasp::cli {
namespace {

template <class... Fs>
struct Overloaded : Fs... {
    using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

std::string quoted(const std::string& s) { return "\"" + s + "\""; }

std::string matrix_text(const ScoreMatrix& m) {
    std::ostringstream out;
    for (std::size_t q = 0; q < m.size(); ++q) {
        out << "  [";
        for (std::size_t k = 0; k < m.size(); ++k) out << (k ? ", " : "") << to_display(Atom::number(m.at(q, k)));
        out << "]\n";
    }
    return out.str();
}

}  // namespace

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const LexError*>(&e) || dynamic_cast<const ParseError*>(&e)) return kExitSyntax;
    if (const auto* lib = dynamic_cast<const stdlib::LibraryError*>(&e)) return lib->syntax() ? kExitSyntax : kExitEval;
    return kExitEval;
}

Session::Session(SessionOptions options) : options_(std::move(options)), env_(frontend::make_global_env(names_)) {
    if (options_.load_stdlib) stdlib::load_stdlib(*env_, names_, options_.extensions);
    lowerer_ = std::make_unique<frontend::Lowerer>(*env_, names_, options_.extensions);
}

std::string Session::example_input() const { return (options_.bos ? "§" : "") + options_.example; }

void Session::set_example(std::string example) {
    options_.example = std::move(example);
    context_.reset();
}

EvalContext& Session::context() {
    if (!context_) context_.emplace(Sequence::from_string(example_input()));
    return *context_;
}

const frontend::Value& Session::lookup(std::string_view name) const {
    if (const auto* v = env_->lookup(name)) return *v;
    throw Error("unbound name '" + std::string(name) + "'");
}

SOp Session::sop(std::string_view name) const {
    const auto& v = lookup(name);
    if (const auto* s = std::get_if<SOp>(&v)) return *s;
    throw Error("'" + std::string(name) + "' is a " + std::string(frontend::value_kind(v)) + ", not an s-op");
}

std::string Session::describe(const std::string& label, const frontend::Value& v) {
    const std::string at = label + "(" + quoted(example_input()) + ")";
    return std::visit(
        Overloaded{
            [&](const Atom& a) { return label + " = " + to_display(a) + "\n"; },
            [&](const frontend::StaticList& l) {
                std::string out = label + " = [";
                for (std::size_t i = 0; i < l.items.size(); ++i) out += (i ? ", " : "") + atom_literal(l.items[i]);
                return out + "]\n";
            },
            [&](const SOp& s) { return at + " = " + to_display(context().eval(s)) + "\n"; },
            [&](const Selector& s) {
                return at + " =\n" +
                       viz::render_heatmap(context().eval(s), context().input(), viz::HeatmapFormat::Ascii);
            },
            [&](const Scorer& s) { return at + " =\n" + matrix_text(context().eval(s)); },
            [&](const Predicate& p) { return label + " = " + std::string(symbol(p)) + "\n"; },
            [&](const frontend::FunctionValue& f) {
                std::string out = "def " + f.def->name + "(";
                for (std::size_t i = 0; i < f.def->params.size(); ++i) out += (i ? ", " : "") + f.def->params[i].name;
                return out + ")\n";
            },
            [&](const frontend::BuiltinFunction& b) { return label + " = built-in " + b.name + "\n"; },
        },
        v);
}

namespace {

nlohmann::ordered_json atom_json(const Atom& a) {
    switch (a.kind()) {
        case AtomKind::Null: return nullptr;
        case AtomKind::Bool: return a.as_bool();
        case AtomKind::Number: {
            const double x = a.as_number();
            if (std::abs(x) < 9e15 && x == std::round(x)) return static_cast<std::int64_t>(x);
            return x;
        }
        default: return a.as_token();
    }
}

}  // namespace

nlohmann::ordered_json Session::value_json(const frontend::Value& v) {
    return std::visit(
        Overloaded{
            [&](const Atom& a) -> nlohmann::ordered_json { return atom_json(a); },
            [&](const frontend::StaticList& l) -> nlohmann::ordered_json {
                auto j = nlohmann::ordered_json::array();
                for (const auto& a : l.items) j.push_back(atom_json(a));
                return j;
            },
            [&](const SOp& s) -> nlohmann::ordered_json {
                auto j = nlohmann::ordered_json::array();
                for (const auto& a : context().eval(s)) j.push_back(atom_json(a));
                return j;
            },
            [&](const Selector& s) -> nlohmann::ordered_json {
                const auto& m = context().eval(s);
                auto j = nlohmann::ordered_json::array();
                for (std::size_t q = 0; q < m.size(); ++q) {
                    auto row = nlohmann::ordered_json::array();
                    for (auto bit : m.row(q)) row.push_back(bit ? 1 : 0);
                    j.push_back(std::move(row));
                }
                return j;
            },
            [&](const Scorer& s) -> nlohmann::ordered_json {
                const auto& m = context().eval(s);
                auto j = nlohmann::ordered_json::array();
                for (std::size_t q = 0; q < m.size(); ++q) {
                    auto row = nlohmann::ordered_json::array();
                    for (std::size_t k = 0; k < m.size(); ++k) row.push_back(m.at(q, k));
                    j.push_back(std::move(row));
                }
                return j;
            },
            [&](const Predicate& p) -> nlohmann::ordered_json { return std::string(symbol(p)); },
            [&](const frontend::FunctionValue&) -> nlohmann::ordered_json { return nullptr; },
            [&](const frontend::BuiltinFunction&) -> nlohmann::ordered_json { return nullptr; },
        },
        v);
}

nlohmann::ordered_json Session::bindings_json() {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& [name, v] : bindings_) {
        if (std::holds_alternative<frontend::FunctionValue>(v)) continue;
        j[name] = value_json(v);
    }
    return j;
}

void Session::execute(std::string_view source, std::ostream* echo) {
    const auto program = frontend::parse_source(source);
    for (const auto& stmt : program.statements) {
        auto result = lowerer_->lower(stmt);
        std::visit(Overloaded{
                       [&](frontend::Binding& b) {
                           bool replaced = false;
                           for (auto& [name, v] : bindings_) {
                               if (name == b.name) {
                                   v = b.value;
                                   replaced = true;
                               }
                           }
                           if (!replaced) bindings_.emplace_back(b.name, b.value);
                           if (echo) *echo << describe(b.name, b.value);
                       },
                       [&](frontend::ExprResult& e) {
                           if (echo) *echo << describe(e.text, e.value);
                       },
                       [&](frontend::SetExample& s) { set_example(s.value); },
                       [&](frontend::DrawRequest& d) {
                           const auto graph = flow(d.target, d.input);
                           if (echo) *echo << viz::render_flow(graph, viz::FlowFormat::Text);
                       },
                   },
                   result);
    }
}

compiler::ArchReport Session::arch(std::string_view name) const {
    return compiler::compile_report(sop(name), {options_.extensions.select_best, &names_});
}

viz::FlowGraph Session::flow(std::string_view name, std::string_view input) const {
    return flow(lookup(name), input);
}

viz::FlowGraph Session::flow(const frontend::Value& target, std::string_view input) const {
    const auto* s = std::get_if<SOp>(&target);
    if (!s) throw Error("draw expects an s-op, got " + std::string(frontend::value_kind(target)));
    return viz::build_flow(*s, Sequence::from_string(input), {&names_, options_.extensions.select_best});
}

int Session::repl(std::istream& in, std::ostream& out, bool prompt) {
    std::string buffer;
    std::string line;
    auto show_prompt = [&] {
        if (prompt) out << (buffer.empty() ? ">> " : ".. ") << std::flush;
    };
    show_prompt();
    while (std::getline(in, line)) {
        if (buffer.empty()) {
            std::istringstream words(line);
            std::string command;
            words >> command;
            if (command == ":quit" || command == ":q") return kExitOk;
            if (command == ":arch") {
                std::string name;
                words >> name;
                try {
                    out << arch(name).to_text();
                } catch (const std::exception& e) {
                    out << "error: " << e.what() << "\n";
                }
                show_prompt();
                continue;
            }
            if (!command.empty() && command[0] == ':') {
                out << "error: unknown command " << command << " (try :arch NAME or :quit)\n";
                show_prompt();
                continue;
            }
        }
        buffer += line;
        buffer += '\n';
        try {
            // Wait for more lines while the statement is still open.
            (void)frontend::parse_source(buffer);
        } catch (const ParseError& e) {
            const bool incomplete = std::string_view(e.what()).find("<end of input>") != std::string_view::npos;
            if (incomplete && !line.empty()) {
                show_prompt();
                continue;
            }
        } catch (const LexError&) {
        }
        try {
            execute(buffer, &out);
        } catch (const std::exception& e) {
            out << "error: " << e.what() << "\n";
        }
        buffer.clear();
        show_prompt();
    }
    return kExitOk;
}

}  // namespace rasp::cli
