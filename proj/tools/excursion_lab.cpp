#include "excursion/experiments.hpp"

int main(int argc, char** argv) {
    return excursion::cli_main(argc, argv);
}
