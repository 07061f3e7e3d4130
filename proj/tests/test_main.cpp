#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include "voltau/real.hpp"

int main(int argc, char** argv) {
    voltau::set_working_precision({50});
    doctest::Context ctx;
    ctx.applyCommandLine(argc, argv);
    return ctx.run();
}
