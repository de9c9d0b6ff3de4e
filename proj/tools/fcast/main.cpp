#include "app.hpp"

int main(int argc, char** argv) {
    return fcast::cli::run(argc, argv);
}
