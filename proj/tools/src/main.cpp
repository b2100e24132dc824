#include <iostream>

#include "dgsm_app/app.hpp"

int main(int argc, char** argv) {
  return dgsm::app::run(argc, argv, dgsm::Registry::builtin(), std::cout, std::cerr);
}
