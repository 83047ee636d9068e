// Writes a seeded synthetic multi-sector price fixture plus a matching config.

#include <CLI11.hpp>
#include <iostream>

#include "pfolio/synthetic.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Generate a synthetic sector fixture"};
    std::string dir;
    std::size_t sectors = 7;
    std::size_t assets = 10;
    std::uint64_t seed = 20211101;
    app.add_option("dir", dir, "Output directory")->required();
    app.add_option("--sectors", sectors, "Number of sectors")->check(CLI::Range(1, 64));
    app.add_option("--assets", assets, "Assets per sector")->check(CLI::Range(2, 1000));
    app.add_option("--seed", seed, "Generator seed");
    CLI11_PARSE(app, argc, argv);

    const auto config = pfolio::synthetic::write_fixture(dir, sectors, assets, seed);
    std::cout << config.string() << '\n';
    return 0;
}
