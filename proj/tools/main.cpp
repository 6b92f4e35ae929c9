// Placeholder entry point; the real CLI lands with the driver modules.
int main() { return 0; }
