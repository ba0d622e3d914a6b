// HTTP chat service.
#include <csignal>
#include <iostream>
#include <pthread.h>
#include <thread>

#include "CLI11.hpp"
#include "cha/error.hpp"
#include "cha/service/chat_service.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Voice conversational health agent service"};
    std::string config_path, bind, data_dir, fixtures_dir;
    bool mock_all = false;
    std::size_t workers = 0;
    app.add_option("--config", config_path, "JSON config file");
    app.add_option("--bind", bind, "host:port to listen on (port 0 picks a free port)");
    app.add_option("--data-dir", data_dir, "directory for sessions, audio and traces");
    app.add_option("--fixtures-dir", fixtures_dir, "directory holding the mock fixture files");
    app.add_option("--workers", workers, "pipeline worker threads");
    app.add_flag("--mock-all", mock_all, "bind every tool and language model to the bundled fixtures");
    CLI11_PARSE(app, argc, argv);

    // Signals are handled on a dedicated thread via sigwait.
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);

    try {
        cha::ServiceConfig config =
            config_path.empty() ? cha::default_service_config() : cha::load_service_config(config_path);
        cha::apply_environment(config);
        if (!bind.empty()) cha::apply_bind(config, bind);
        if (!data_dir.empty()) config.data_dir = data_dir;
        if (!fixtures_dir.empty()) config.fixtures_dir = fixtures_dir;
        if (workers > 0) config.workers = workers;
        if (mock_all) cha::force_mock_backends(config);

        cha::ChatService service(config);
        const int port = service.bind();
        std::cout << "listening on http://" << config.bind_host << ":" << port << std::endl;

        std::thread waiter([&] {
            int sig = 0;
            sigwait(&signals, &sig);
            service.stop();
        });
        service.listen();
        // listen() also returns when the server fails; make sure the waiter exits.
        pthread_kill(waiter.native_handle(), SIGTERM);
        waiter.join();
        service.wait_idle();
    } catch (const cha::Error& e) {
        std::cerr << "cha-server: " << cha::to_string(e.code()) << ": " << e.what() << "\n";
        return 1;
    }
    return 0;
}
