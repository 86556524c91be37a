from potentia.main import main

main()
