#include "pat/config.hpp"
#include "pat/image.hpp"
#include "pat/phantoms.hpp"

#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace pat;
namespace fs = std::filesystem;

namespace {

RunConfig parse(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in, "test.cfg");
}

std::string config_error(const std::string& text) {
    try {
        parse(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch() {
    const fs::path dir = fs::temp_directory_path() / "pat_cli_test";
    fs::create_directories(dir);
    return dir;
}

// Exit status of patcli with `args`, output discarded.
int patcli(const std::string& args) {
    const std::string cmd = std::string(PATCLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

const std::string kSmall = "--set 'refinement = 1' --set 'T = 0.5' ";

}  // namespace

TEST_CASE("empty configuration gives the defaults") {
    const RunConfig c = parse("");
    CHECK(c == RunConfig{});
    CHECK(c.medium == default_nondimensional_medium());
    CHECK(parse("# only a comment\n\n   \n") == RunConfig{});
}

TEST_CASE("invalid values name the key and the line") {
    const std::string e = config_error("refinement = 2\nc_s = -1\n");
    CHECK(e.find("c_s") != std::string::npos);
    CHECK(e.find("test.cfg:2") != std::string::npos);
    CHECK(config_error("colour = red\n").find("unknown key 'colour'") != std::string::npos);
    CHECK(config_error("iterations = many\n").find("test.cfg:1") != std::string::npos);
    CHECK(config_error("just words\n").find("key = value") != std::string::npos);
    CHECK_FALSE(config_error("cfl_safety = 1.5\n").empty());
    CHECK_FALSE(config_error("seed = -1\n").empty());
    CHECK_FALSE(config_error("seed = 18446744073709551616\n").empty());
    CHECK_FALSE(config_error("model = ideal\n").empty());
}

TEST_CASE("dump and parse round trip") {
    RunConfig c;
    c.medium.c_s = 1.0 / 3.0;
    c.medium.H = 0.7;
    c.refinement = 3;
    c.T = 2.0 / 7.0;
    c.model = MeasurementModel::idealized;
    c.gamma = 1e-3;
    c.seed = 18446744073709551615ull;
    c.adjoint = AdjointKind::discrete;
    c.phantom = "blobs";
    c.phantom_variant = SheppLoganVariant::modified;
    c.data_path = "some/data.trace";
    c.stop_on_stagnation = true;
    std::ostringstream out;
    dump_config(out, c);
    CHECK(parse(out.str()) == c);
    std::ostringstream again;
    dump_config(again, parse(out.str()));
    CHECK(again.str() == out.str());
}

TEST_CASE("required paths") {
    CHECK_THROWS_AS(require_path("", "data"), ConfigError);
    CHECK_NOTHROW(require_path("x", "data"));
    try {
        require_path("", "data");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("data") != std::string::npos);
    }
    CHECK_THROWS_AS(load_config("/nonexistent/pat.cfg"), IoError);
}

TEST_CASE("constant field renders mid-gray") {
    const Mesh m = generate_disk_mesh(2);
    const std::string img = render_field_pgm(Field::Constant(m.num_vertices(), 5.0), m, 32);
    const std::string header = "P5\n32 32\n255\n";
    REQUIRE(img.size() == header.size() + 32 * 32);
    CHECK(img.compare(0, header.size(), header) == 0);
    // the centre pixel lies inside the mesh
    CHECK(static_cast<unsigned char>(img[header.size() + 16 * 32 + 16]) == 128);
    // the corner pixel lies outside
    CHECK(static_cast<unsigned char>(img[header.size()]) == 0);
}

TEST_CASE("blob centre is the brightest pixel") {
    const Mesh m = generate_disk_mesh(4);
    const int res = 64;
    // (x, y) = (-0.25, 0.25) is a pixel centre for res 64 on [-1, 1]^2
    const Field f = smooth_blobs(m, {{{-1.0 + 24.5 * 2.0 / res, 1.0 - 24.5 * 2.0 / res}, 0.3, 1.0}});
    const std::string img = render_field_pgm(f, m, res);
    const std::size_t off = std::string("P5\n64 64\n255\n").size();
    unsigned char best = 0;  // vertex maximum need not fall on a pixel, so 255 is not required
    for (std::size_t i = off; i < img.size(); ++i) {
        best = std::max(best, static_cast<unsigned char>(img[i]));
    }
    CHECK(static_cast<unsigned char>(img[off + 24 * res + 24]) == best);
}

TEST_CASE("image errors") {
    const Mesh m = generate_disk_mesh(1);
    CHECK_THROWS_AS(render_field_pgm(Field::Zero(m.num_vertices()), m, 15), ConfigError);
    CHECK_THROWS_AS(render_field_pgm(Field::Zero(3), m, 32), ConfigError);
}

TEST_CASE("exit codes") {
    const fs::path dir = scratch();
    CHECK(patcli(kSmall + "mesh -o " + (dir / "m.patmesh").string()) == 0);
    CHECK(patcli("--set 'c_s = -1' dump-config") == 2);
    CHECK(patcli("--set 'bogus = 1' dump-config") == 2);
    CHECK(patcli("no-such-command") == 2);
    CHECK(patcli(kSmall + "--set 'cfl_safety = 0.99' forward -o " + (dir / "t.trace").string()) == 3);
    CHECK(patcli(kSmall + "--set 'data = /nonexistent/d.trace' reconstruct") == 4);
    CHECK(patcli("--config /nonexistent/pat.cfg dump-config") == 4);
    CHECK(patcli(kSmall + "reconstruct") == 2);
}

TEST_CASE("forward runs are byte-identical") {
    const fs::path dir = scratch();
    const std::string a = (dir / "a.trace").string();
    const std::string b = (dir / "b.trace").string();
    REQUIRE(patcli(kSmall + "--deterministic forward -o " + a) == 0);
    REQUIRE(patcli(kSmall + "--deterministic forward -o " + b) == 0);
    const std::string ta = slurp(a);
    CHECK(ta.rfind("pattrace 1", 0) == 0);
    CHECK(ta.find("fabry_perot") != std::string::npos);
    CHECK(ta == slurp(b));
}

TEST_CASE("reconstruct writes a report") {
    const fs::path dir = scratch();
    const std::string data = (dir / "r.trace").string();
    const std::string truth = (dir / "r.field").string();
    const std::string out = (dir / "recon").string();
    fs::remove_all(out);
    REQUIRE(patcli(kSmall + "--set 'phantom = blobs' phantom -o " + truth) == 0);
    REQUIRE(patcli(kSmall + "forward -i " + truth + " -o " + data) == 0);
    REQUIRE(patcli(kSmall + "--set 'iterations = 3' --set 'data = " + data + "' --set 'truth = " +
                   truth + "' --set 'output_dir = " + out + "' reconstruct") == 0);
    CHECK(fs::exists(fs::path(out) / "report.txt"));
    CHECK(fs::exists(fs::path(out) / "residuals.csv"));
    CHECK(slurp(fs::path(out) / "result.pgm").rfind("P5\n256 256\n255\n", 0) == 0);
    CHECK(slurp(fs::path(out) / "report.txt").find("iterations = 3") != std::string::npos);
}
