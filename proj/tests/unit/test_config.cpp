#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "fskmc/commands.hpp"
#include "fskmc/config.hpp"

using namespace fskmc;

namespace {

RunConfig parse(const std::string& text)
{
    std::istringstream in(text);
    return parse_config(in, "test.ini");
}

std::string config_error_key(const std::string& text)
{
    try {
        parse(text);
    } catch (const ConfigError& e) {
        return e.key();
    }
    return "<no error>";
}

const std::string kMinimal = "[lattice]\ndims = 32\n[partition]\ncell = 4\n";

}  // namespace

TEST_CASE("minimal config fills defaults")
{
    const auto c = parse(kMinimal);
    CHECK(c.model.name == "arrhenius");
    CHECK(c.order == GroupOrder::OE);
    CHECK(c.burn_in == 0.2);
    CHECK(c.workers == default_workers());
    CHECK(c.schedule == ScheduleKind::lie);
    CHECK(c.balance.cadence == 10);
    CHECK(c.balance.theta == 2.0);

    const auto r = parse(kMinimal + "[schedule]\nkind = random\n");
    CHECK(r.mu_o == 0.5);
    CHECK(r.rescale_random_time);
}

TEST_CASE("config errors name the key")
{
    const auto k = config_error_key("[lattice]\ndims = 30\n[partition]\ncell = 4\n");
    CHECK(k.find("lattice.dims") != std::string::npos);
    CHECK(k.find("partition.cell") != std::string::npos);

    CHECK(config_error_key(kMinimal + "[model]\ncolour = red\n") == "model.colour");
    CHECK(config_error_key(kMinimal + "[extras]\nx = 1\n") == "extras");
    CHECK(config_error_key(kMinimal + "[schedule]\ndt = fast\n") == "schedule.dt");
    CHECK(config_error_key(kMinimal + "[schedule]\nmu = 0.3, 0.3\n") == "schedule.mu");
    CHECK(config_error_key(kMinimal + "[schedule]\nkind = euler\n") == "schedule.kind");
    CHECK(config_error_key(kMinimal + "[model]\nname = potts\n") == "model.name");
    CHECK(config_error_key(kMinimal + "[balance]\ntheta = 0.5\n") == "balance.theta");
    CHECK(config_error_key(kMinimal + "[observables]\nlist = energy\n") == "observables.list");
    CHECK(config_error_key(kMinimal + "[run]\nprofile = ramp\ninitial_density = 0.2\n") == "run.profile");
    CHECK(config_error_key("[lattice]\ndims = 32, 32\n[partition]\ncell = 4, 4\n[model]\nname = zgb\n")
              .find("partition.cell") != std::string::npos);

    try {
        parse(kMinimal + "[model\nname = zgb\n");
        FAIL("expected a parse error");
    } catch (const ConfigError& e) {
        CHECK(e.line() == 5);
    }
    CHECK_THROWS_AS(load_config("/nonexistent/config.ini"), ConfigError);
}

TEST_CASE("exact field convention shifts h")
{
    const auto c = parse(kMinimal + "[model]\nbeta = 2\nK = 1\nh = 1.5\nfield = exact\n");
    const auto m = make_model(c);
    const auto* a = dynamic_cast<const ArrheniusModel*>(m.get());
    REQUIRE(a);
    CHECK(a->params().h == doctest::Approx(-0.5));
}

TEST_CASE("shipped configs validate")
{
    int n = 0;
    for (const auto& e : std::filesystem::directory_iterator(FSKMC_CONFIG_DIR)) {
        if (e.path().extension() != ".ini")
            continue;
        INFO(e.path().string());
        CHECK_NOTHROW(load_config(e.path().string()));
        ++n;
    }
    CHECK(n >= 3);
}

TEST_CASE("run output is identical across worker counts")
{
    std::string text = kMinimal;
    text.replace(text.find("32"), 2, "256");
    text += "[schedule]\nkind = strang\ndt = 0.5\ntime = 20\n[run]\ninitial_density = 0.4\n"
            "[observables]\nlist = coverage, correlation\nk_max = 3\n"
            "[balance]\nenabled = true\ncadence = 2\ntheta = 1.1\n";
    std::vector<std::string> outs, loads;
    for (std::size_t w : {1, 2, 5}) {
        auto c = parse(text);
        c.workers = w;
        std::ostringstream res, wl, log;
        simulate(c, res, &wl, log);
        outs.push_back(res.str());
        loads.push_back(wl.str());
    }
    CHECK(outs[0].rfind("run_id,time,observable,value,stderr\n", 0) == 0);
    CHECK(outs[0].find("mean_coverage") != std::string::npos);
    CHECK(loads[0].rfind("window,cell,jumps\n", 0) == 0);
    for (std::size_t i = 1; i < outs.size(); ++i) {
        CHECK(outs[i] == outs[0]);
        CHECK(loads[i] == loads[0]);
    }
}

TEST_CASE("exact and benchmark commands")
{
    std::ostringstream os;
    cmd_exact({{1.0, 2.0}, {1.0}, 1.0, 2}, os);
    const std::string s = os.str();
    CHECK(s.rfind("quantity,beta,K,h,k,value\n", 0) == 0);
    CHECK(s.find("coverage_1d,1,1,1,,0.5\n") != std::string::npos);
    CHECK(s.find("coverage_2d,1,1,2,,0.5\n") != std::string::npos);
    CHECK(s.find("critical_beta,1.762747174") != std::string::npos);

    CHECK(loglog_slope({1, 2, 4, 8}, {3, 6, 12, 24}) == doctest::Approx(1.0));
    CHECK(loglog_slope({1, 10, 100}, {5, 500, 50000}) == doctest::Approx(2.0));

    BenchmarkOptions b;
    b.sizes = {512, 1024};
    b.horizon = 1.0;
    b.workers = {1, 2};
    std::ostringstream csv, log;
    const auto rep = cmd_benchmark(b, csv, log);
    CHECK(rep.rows.size() == 6);
    CHECK(csv.str().rfind("size,workers,schedule,dt,wall_seconds,jumps_per_second\n", 0) == 0);
}
