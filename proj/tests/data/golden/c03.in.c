const char *greet(void) {
    char name[8];
    strcpy(name, "world{");
    return "hello {name}";
}
