const char *greet(void) {
    char ret_val_buf[8];
    strcpy(ret_val_buf, "world{");
    return "hello {name}";
}
