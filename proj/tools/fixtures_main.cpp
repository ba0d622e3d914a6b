// Regenerates (or verifies) the bundled fixture files.
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "cha/error.hpp"
#include "fixturegen.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Generate the bundled mock fixtures"};
    std::string out_dir, check_dir;
    auto* out = app.add_option("--out", out_dir, "write the fixture files here");
    app.add_option("--check", check_dir, "compare an existing fixture directory against a fresh build")->excludes(out);
    CLI11_PARSE(app, argc, argv);
    if (out_dir.empty() && check_dir.empty()) {
        std::cerr << "one of --out or --check is required\n";
        return 2;
    }
    try {
        const auto bundle = cha::fixturegen::generate();
        if (!out_dir.empty()) {
            cha::fixturegen::write_bundle(bundle, out_dir);
            std::cout << "wrote " << cha::fixturegen::bundle_files(bundle).size() << " files to " << out_dir << "\n";
            return 0;
        }
        int mismatches = 0;
        for (const auto& [rel, bytes] : cha::fixturegen::bundle_files(bundle)) {
            std::ifstream in(std::filesystem::path(check_dir) / rel, std::ios::binary);
            std::ostringstream buf;
            buf << in.rdbuf();
            if (!in || buf.str() != bytes) {
                std::cout << "differs: " << rel << "\n";
                ++mismatches;
            }
        }
        if (mismatches == 0) std::cout << "fixtures up to date\n";
        return mismatches == 0 ? 0 : 1;
    } catch (const cha::Error& e) {
        std::cerr << "cha-fixtures: " << e.what() << "\n";
        return 1;
    }
}
