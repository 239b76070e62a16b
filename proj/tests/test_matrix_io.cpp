#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "steinlab/matrix_io.hpp"
#include "steinlab/rng.hpp"

using namespace steinlab;

TEST_CASE("json round trip") {
    auto rng = labeled_stream(1, "test.io");
    const auto h = random_hermitian(4, rng);
    const auto back = hermitian_from_json_text(hermitian_to_json_text(h));
    CHECK((back.matrix() - h.matrix()).norm() < 1e-12);
}

TEST_CASE("reading validates hermiticity") {
    CHECK_THROWS_AS(
        hermitian_from_json_text(R"({"dim":2,"re":[[0,1],[0,0]],"im":[[0,0],[0,0]]})"),
        PreconditionError);
    CHECK_THROWS_AS(hermitian_from_json_text(R"({"dim":2,"re":[[0,1]]})"), ConfigError);
    CHECK_THROWS_AS(hermitian_from_json_text("not json"), ConfigError);
}

TEST_CASE("file io") {
    const std::string path = "io_test_matrix.json";
    auto rng = labeled_stream(2, "test.io2");
    const auto h = random_hermitian(3, rng);
    write_hermitian(path, h);
    const auto back = read_hermitian(path);
    CHECK((back.matrix() - h.matrix()).norm() < 1e-12);
    std::remove(path.c_str());

    CHECK_THROWS_AS(read_hermitian("definitely_missing.json"), ConfigError);
}

TEST_CASE("im block is optional and densities are validated") {
    const auto h = hermitian_from_json_text(R"({"dim":2,"re":[[0.3,0.1],[0.1,0.7]]})");
    CHECK(h.matrix()(0, 1).real() == doctest::Approx(0.1));

    const std::string path = "io_test_density.json";
    {
        std::ofstream out(path);
        out << R"({"dim":2,"re":[[0.6,0.0],[0.0,0.6]]})";
    }
    CHECK_THROWS_AS(read_density(path), PreconditionError);  // trace 1.2
    std::remove(path.c_str());
}
