#include <csignal>
#include <iostream>

#include "CLI11.hpp"
#include "edgefaas/overlay/cert.hpp"
#include "edgefaas/overlay/lighthouse.hpp"

namespace {
volatile std::sig_atomic_t g_stop = 0;
void on_signal(int) {
    g_stop = 1;
}
}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Overlay beacon: stores overlay-ip -> endpoint mappings and answers peer queries"};
    std::string listen = "127.0.0.1:4242";
    std::string ca_path;
    app.add_option("--listen", listen, "ip:port to bind")->capture_default_str();
    app.add_option("--ca", ca_path, "CA certificate file (binary)")->required();
    CLI11_PARSE(app, argc, argv);

    try {
        // The CA file is loaded so a bad deployment fails fast; queries
        // themselves are unauthenticated metadata.
        edgefaas::overlay::load_bytes(ca_path);
        edgefaas::overlay::Lighthouse lh(edgefaas::overlay::Endpoint::parse(listen));
        lh.start();
        std::cout << "lighthouse listening on " << lh.endpoint().str() << "\n";
        std::signal(SIGINT, on_signal);
        std::signal(SIGTERM, on_signal);
        while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
        lh.stop();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
