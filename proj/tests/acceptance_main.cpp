int acceptance_stub_main() { return 0; }
int main() { return acceptance_stub_main(); }
