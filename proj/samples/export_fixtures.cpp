// Writes the deterministic fixtures as CLI inputs: CSV clouds and a PGM
// raster of the branch model.
//
//   export_fixtures OUTPUT_DIR

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <branchtopo/report.hpp>
#include <branchtopo/testkit.hpp>

namespace bt = branchtopo;

static void write_csv(const std::filesystem::path& path, const bt::PointCloud& cloud, const char* title)
{
    std::ofstream out(path);
    out << "# " << title << "\n";
    for (const bt::Point2 p : cloud.points()) {
        out << bt::detail::format_real(p.x) << ',' << bt::detail::format_real(p.y) << '\n';
    }
}

int main(int argc, char** argv)
{
    if (argc != 2) {
        std::fprintf(stderr, "usage: %s OUTPUT_DIR\n", argv[0]);
        return 2;
    }
    const std::filesystem::path dir = argv[1];
    std::filesystem::create_directories(dir);

    bt::testkit::FixtureSpec spec;
    write_csv(dir / "ring.csv", bt::testkit::generate_fixture(spec), "ring: 16 points, radius 50");
    spec.kind = bt::testkit::FixtureKind::CShape;
    write_csv(dir / "c_shape.csv", bt::testkit::generate_fixture(spec), "ring with one point removed at angle pi/16");
    spec.kind = bt::testkit::FixtureKind::FigureEight;
    write_csv(dir / "figure_eight.csv", bt::testkit::generate_fixture(spec), "two overlapping rings, radius 50");

    // branch model, stroke width 3, as a binary graymap
    const int canvas = 128;
    const auto mask = bt::testkit::branch_model_mask(3, canvas);
    std::ofstream pgm(dir / "branch_w3.pgm", std::ios::binary);
    pgm << "P5\n" << canvas << ' ' << canvas << "\n255\n";
    for (const bool on : mask) {
        pgm.put(on ? '\xff' : '\x00');
    }
    return 0;
}
