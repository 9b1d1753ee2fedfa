#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "pem/imaging.hpp"
#include "pem/predictor.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path& workdir() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / "pem_cli_tests";
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

struct Run {
  int code;
  std::string out, err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Run pem_cli(const std::string& args) {
  const auto out = workdir() / "stdout.txt", err = workdir() / "stderr.txt";
  const std::string cmd = std::string("\"") + PEM_CLI_PATH + "\" " + args + " >\"" +
                          out.string() + "\" 2>\"" + err.string() + "\"";
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
}

fs::path file(const std::string& name) { return workdir() / name; }

std::string q(const fs::path& p) { return "\"" + p.string() + "\""; }

void write_random_bytes(const fs::path& p, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::string s(n, '\0');
  for (auto& c : s) c = static_cast<char>(rng() & 0xFF);
  std::ofstream(p, std::ios::binary) << s;
}

fs::path smooth_cover(const std::string& name, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto path = file(name);
  pem::write_pgm(oracle::smooth_plane(96, 80, rng), path);
  return path;
}

}  // namespace

TEST_CASE("embed then extract restores message and cover byte for byte") {
  const auto cover = smooth_cover("rt_cover.pgm", 1);
  const auto msg = file("rt_msg.bin");
  write_random_bytes(msg, 40, 2);
  for (const std::string extra : {"--theta 1", "--theta 3 --init localmean"}) {
    auto r = pem_cli("embed --cover " + q(cover) + " --message " + q(msg) + " --out " +
                     q(file("rt_stego.pgm")) + " " + extra);
    REQUIRE_MESSAGE(r.code == 0, r.err);
    CHECK(r.out.find("bits_embedded=320") != std::string::npos);
    r = pem_cli("extract --stego " + q(file("rt_stego.pgm")) + " --message " +
                q(file("rt_msg_out.bin")) + " --out " + q(file("rt_cover_out.pgm")) + " " + extra);
    REQUIRE_MESSAGE(r.code == 0, r.err);
    CHECK(slurp(file("rt_msg_out.bin")) == slurp(msg));
    CHECK(slurp(file("rt_cover_out.pgm")) == slurp(cover));
  }
}

TEST_CASE("exit codes") {
  const auto cover = smooth_cover("ec_cover.pgm", 3);
  const auto msg = file("ec_msg.bin");
  write_random_bytes(msg, 16, 4);

  SUBCASE("oversized message") {
    const auto big = file("ec_big.bin");
    write_random_bytes(big, 4000, 5);
    const auto r = pem_cli("embed --cover " + q(cover) + " --message " + q(big) + " --out " +
                           q(file("ec_stego.pgm")));
    CHECK(r.code == 2);
    CHECK(r.err.find("capacity exceeded by ") != std::string::npos);
    CHECK(r.err.find(" bits") != std::string::npos);
  }
  SUBCASE("theta 0 is a usage error") {
    const auto r = pem_cli("embed --cover " + q(cover) + " --message " + q(msg) + " --out " +
                           q(file("ec_stego.pgm")) + " --theta 0");
    CHECK(r.code == 64);
  }
  SUBCASE("wrong theta on extract") {
    auto r = pem_cli("embed --cover " + q(cover) + " --message " + q(msg) + " --out " +
                     q(file("ec_stego.pgm")) + " --theta 2");
    REQUIRE(r.code == 0);
    r = pem_cli("extract --stego " + q(file("ec_stego.pgm")) + " --message " +
                q(file("ec_out.bin")) + " --out " + q(file("ec_out.pgm")) + " --theta 1");
    CHECK(r.code == 3);
  }
  SUBCASE("missing weight file") {
    const auto r = pem_cli("capacity --cover " + q(cover) + " --predictor nn:" +
                           q(file("does_not_exist.nnpw")));
    CHECK(r.code == 64);
  }
  SUBCASE("unknown flag") {
    CHECK(pem_cli("capacity --bogus").code == 64);
  }
}

TEST_CASE("capacity command") {
  pem::write_pgm(pem::PixelPlane(64, 64, 128), file("flat.pgm"));
  auto r = pem_cli("capacity --cover " + q(file("flat.pgm")) + " --theta 1");
  REQUIRE(r.code == 0);
  CHECK(r.out == "capacity_bits=4064\nbpp=0.992188\n");

  pem::write_pgm(pem::PixelPlane(64, 64, 255), file("saturated.pgm"));
  r = pem_cli("capacity --cover " + q(file("saturated.pgm")) + " --theta 1");
  REQUIRE(r.code == 0);
  CHECK(r.out == "capacity_bits=0\nbpp=0.000000\n");
}

TEST_CASE("analyze and rdcurve CSV") {
  const auto a = smooth_cover("csv_b.pgm", 6);
  const auto b = smooth_cover("csv_a.pgm", 7);
  const std::string header =
      "# pem-codec v1, seed=5\n"
      "image,predictor,theta,bpp,psnr_db,ssim,entropy_bits,variance,p95,gini\n";

  auto r = pem_cli("analyze " + q(a) + " " + q(b) + " --thetas 2,1 --seed 5");
  REQUIRE_MESSAGE(r.code == 0, r.err);
  CHECK(r.out.rfind(header, 0) == 0);
  // Rows sorted by image then theta.
  const auto first = r.out.find("csv_a.pgm,lmi,1,");
  const auto second = r.out.find("csv_a.pgm,lmi,2,");
  const auto third = r.out.find("csv_b.pgm,lmi,1,");
  CHECK(first != std::string::npos);
  CHECK(first < second);
  CHECK(second < third);

  pem::write_pgm(pem::PixelPlane(32, 32, 77), file("const.pgm"));
  r = pem_cli("analyze --cover " + q(file("const.pgm")));
  REQUIRE(r.code == 0);
  CHECK(r.out.find("const.pgm,lmi,1,") != std::string::npos);
  CHECK(r.out.find(",inf,1.000000,0.000000,0.000000,0,0.000000\n") != std::string::npos);

  const std::string rd = "rdcurve --cover " + q(a) + " --steps 3 --seed 5";
  r = pem_cli(rd);
  REQUIRE_MESSAGE(r.code == 0, r.err);
  CHECK(r.out.rfind(header, 0) == 0);
  std::istringstream lines(r.out);
  int rows = 0;
  for (std::string line; std::getline(lines, line);) rows += line.rfind("csv_b.pgm,", 0) == 0;
  CHECK(rows == 3 * 4);
  CHECK(pem_cli(rd).out == r.out);
}

TEST_CASE("nn predictor from weight files") {
  const auto cover = smooth_cover("nn_cover.pgm", 8);
  const auto msg = file("nn_msg.bin");
  write_random_bytes(msg, 8, 9);
  pem::save_weights(pem::identity_graph(), file("identity.nnpw"));
  pem::save_weights(pem::box_mean_graph(3), file("box3.nnpw"));
  const std::string flags = " --predictor nn:" + file("identity.nnpw").string() + "," +
                            file("box3.nnpw").string() + " --init localmean --theta 2";
  auto r = pem_cli("embed --cover " + q(cover) + " --message " + q(msg) + " --out " +
                   q(file("nn_stego.pgm")) + flags);
  REQUIRE_MESSAGE(r.code == 0, r.err);
  r = pem_cli("extract --stego " + q(file("nn_stego.pgm")) + " --message " +
              q(file("nn_msg_out.bin")) + " --out " + q(file("nn_cover_out.pgm")) + flags);
  REQUIRE_MESSAGE(r.code == 0, r.err);
  CHECK(slurp(file("nn_msg_out.bin")) == slurp(msg));
  CHECK(slurp(file("nn_cover_out.pgm")) == slurp(cover));

  std::ofstream(file("garbage.nnpw"), std::ios::binary) << "NOPE";
  CHECK(pem_cli("capacity --cover " + q(cover) + " --predictor nn:" + file("garbage.nnpw").string())
            .code == 64);
}
