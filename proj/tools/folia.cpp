// folia command line: exact blow-up resolution of plane foliation and curve
// singularities, ramification search, Camacho-Sad indices and separatrices.

#include "folia/report.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

std::string read_input(const std::string& path) {
    if (path.empty() || path == "-") {
        std::ostringstream os;
        os << std::cin.rdbuf();
        return os.str();
    }
    std::ifstream in(path);
    if (!in) throw folia::domain_error("cannot open input file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::string stem_of(const std::string& path) {
    if (path.empty() || path == "-") return "(stdin)";
    std::size_t slash = path.find_last_of("/\\");
    std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
    std::size_t dot = base.find_last_of('.');
    return dot == std::string::npos ? base : base.substr(0, dot);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact resolution of plane foliation singularities by blow-ups "
                 "and ramifications"};
    app.require_subcommand(1);

    std::string input_path;
    folia::Options opts;
    std::string name_override;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("input", input_path, "input file ('-' or omitted for stdin)");
        sub->add_option("--order", opts.order, "truncation order (default 16)");
        sub->add_option("--dmax", opts.dmax, "largest ramification exponent tried (default 12)");
        sub->add_option("--max-depth", opts.max_depth, "blow-up depth guard (default 50)");
        sub->add_option("--emit", opts.emit, "output format: text, json or dot")
            ->check(CLI::IsMember({"text", "json", "dot"}));
        sub->add_option("--graph", opts.dot_graph,
                        "which graph --emit dot prints: dual or centers")
            ->check(CLI::IsMember({"dual", "centers"}));
        sub->add_option("--name", name_override, "document name used in reports");
    };

    const char* commands[] = {"resolve", "indices", "separatrix", "ramify", "curve-check"};
    const char* descriptions[] = {
        "reduce the singularities of a foliation by blow-ups",
        "verify the Camacho-Sad index theorem on every invariant component",
        "compute a separatrix jet at the origin",
        "find the least ramification exponent giving a free-center, simple-only reduction",
        "curve form of the theorem: ramify, resolve, check centers"};
    for (int k = 0; k < 5; ++k) add_common(app.add_subcommand(commands[k], descriptions[k]));

    CLI11_PARSE(app, argc, argv);
    std::string command = app.get_subcommands().front()->get_name();

    try {
        std::string text = read_input(input_path);
        std::string name = name_override.empty() ? stem_of(input_path) : name_override;
        folia::InputDocument doc = folia::parse_input(text, name);
        doc.options = opts;
        folia::Report rep = folia::run_command(doc, command);
        std::cout << folia::render_report(rep, opts);
        return rep.exit_code;
    } catch (const folia::parse_error& e) {
        std::cerr << "parse error (line " << e.line << ", column " << e.column
                  << "): " << e.what() << "\n";
        return 1;
    } catch (const folia::domain_error& e) {
        std::cerr << "error: " << e.what();
        if (!e.chart_path.empty()) std::cerr << " [chart " << e.chart_path << "]";
        std::cerr << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
}
