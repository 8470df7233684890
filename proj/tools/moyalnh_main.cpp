// moyalnh command line front end. Drives the shared library exclusively
// through the public C API.

#include <cstdio>
#include <cstring>

#include "moyalnh.h"

namespace {

void usage(std::FILE* to) {
    std::fprintf(to,
                 "usage: moyalnh <command> [args]\n"
                 "\n"
                 "commands:\n"
                 "  run <config-path>       run a scenario config, write outputs\n"
                 "  validate <config-path>  parse and validate a config without running\n"
                 "  version                 print the library version\n"
                 "\n"
                 "exit codes: 0 success/PASS, 1 usage or config error, 2 numerical FAIL\n");
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        usage(stderr);
        return 1;
    }
    const char* cmd = argv[1];

    if (std::strcmp(cmd, "version") == 0) {
        std::printf("moyalnh %s\n", mnh_version());
        return 0;
    }

    if (std::strcmp(cmd, "run") == 0 || std::strcmp(cmd, "validate") == 0) {
        if (argc != 3) {
            usage(stderr);
            return 1;
        }
        if (std::strcmp(cmd, "validate") == 0) {
            mnh_status st = mnh_scenario_validate(argv[2]);
            if (st != MNH_OK) {
                std::fprintf(stderr, "invalid: %s\n", mnh_last_error());
                return 1;
            }
            std::printf("ok\n");
            return 0;
        }
        int exit_code = 0;
        mnh_status st = mnh_scenario_run(argv[2], &exit_code);
        if (st == MNH_ERR_CONFIG || st == MNH_ERR_INVALID_ARGUMENT || st == MNH_ERR_IO) {
            std::fprintf(stderr, "error: %s\n", mnh_last_error());
            return 1;
        }
        if (st != MNH_OK) {
            std::fprintf(stderr, "numerical failure: %s\n", mnh_last_error());
            return 2;
        }
        return exit_code;
    }

    usage(stderr);
    return 1;
}
