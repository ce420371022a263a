// Generates synthetic NSL-KDD-format train/test splits for fixtures and
// desk-scale experiments.

#include <CLI11.hpp>
#include <iostream>

#include "advexplain/error.hpp"
#include "advexplain/synth.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Synthetic NSL-KDD-format data generator"};
    std::string train_path = "KDDTrain+.txt";
    std::string test_path = "KDDTest+.txt";
    std::size_t n_train = 30000, n_test = 6000;
    std::uint64_t seed = 42;
    app.add_option("--train-out", train_path, "training split path");
    app.add_option("--test-out", test_path, "test split path");
    app.add_option("--n-train", n_train, "training record count");
    app.add_option("--n-test", n_test, "test record count");
    app.add_option("--seed", seed, "rng seed");
    CLI11_PARSE(app, argc, argv);

    try {
        advexplain::write_synthetic_nslkdd_file(train_path,
                                                {n_train, seed, true});
        advexplain::write_synthetic_nslkdd_file(test_path,
                                                {n_test, seed + 1, true});
    } catch (const advexplain::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    std::cout << "wrote " << n_train << " records to " << train_path << " and "
              << n_test << " records to " << test_path << "\n";
    return 0;
}
